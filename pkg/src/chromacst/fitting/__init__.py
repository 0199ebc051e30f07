from chromacst.fitting.nearest import NnIndex, nearest_index, nn_build, nn_query
from chromacst.fitting.oracle import OracleFit, fit_features, least_squares_start, oracle_fit
