import numpy as np
out = np.concatenate([a, b])
