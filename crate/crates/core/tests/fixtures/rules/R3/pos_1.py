import numpy as np
out = np.zeros((0, 4))
for b in batches:
    out = np.concatenate([out, b])  # expect: R3
