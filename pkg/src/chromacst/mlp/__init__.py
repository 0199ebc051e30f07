from chromacst.mlp.encoding import EncodingKind, InputEncoding, encode_input, encode_many, fit_encoding
from chromacst.mlp.model import (
    Activation,
    MlpModel,
    assemble_cst,
    disassemble_cst,
    forward_encoded,
    init_model,
    predict_cst,
)
from chromacst.mlp.train import TrainConfig, TrainResult, cosine_loss, dataset_loss, train
