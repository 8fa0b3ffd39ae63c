"Configuration file"


NUMERICS_CONFIG = {
    'unitarity_tol': 1e-9,
    'degeneracy_tol': 1e-9,
    'zero_tol': 1e-12}


SIMULATION_CONFIG = {
    'leakage_tol': 1e-9,
    'null_angle_tol': 1e-12}


VERIFY_CONFIG = {
    'tol': 1e-8,
    'subspaces': (-2, 2)}


XK_TABLE_CONFIG = {
    'n': 16,
    'dims': (2, 4, 8, 16)}


LOSS_CONFIG = {
    'T': 0.9,
    'dim': 16}
