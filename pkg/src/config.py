"""Published defaults for DivMF training and evaluation.

Run-time configuration lives in `src.training.config.TrainConfig` and
`src.cli.config.RunConfig`; the constants here only seed their defaults.
"""

# Optimizer (Adam with L2 folded into the gradient)
LR = 0.001
WEIGHT_DECAY = 0.0001
BETA1 = 0.9
BETA2 = 0.999
ADAM_EPS = 1e-8

# Model
EMBED_DIM = 32
INIT_SCALE = 0.1  # divided by sqrt(d)

# Recommendation
TOP_K = 5

# Accuracy phase
BPR_BATCH_SIZE = 1024
ACCURACY_PATIENCE = 5
MAX_ACCURACY_EPOCHS = 200

# Diversity phase
EPS_LOG = 1e-12
MINIBATCH_ROWS = 5000
MINIBATCH_COLS = 5000
UNMASK_SCHEMES = ("none", "top_plus", "random")
DEFAULT_UNMASK_SCHEME = "top_plus"
DEFAULT_N_UNMASK = 100
UNMASK_BY_DATASET = {
    "epinions-15": 50,
    "ml-1m": 100,
    "ml-10m": 100,
    "gowalla-15": 500,
    "yelp-15": 500,
}

# Preprocessing
DEFAULT_CORE = 15
MIN_USER_INTERACTIONS = 3
