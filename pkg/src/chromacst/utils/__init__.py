from chromacst.utils.fingerprint import fingerprint_documents, fingerprint_file
from chromacst.utils.job import JobConfig, load_config_file, resolve_config, validate_field
from chromacst.utils.rng import STREAMS, stream
from chromacst.utils.store import ArtifactStore, dump_json, load_json
