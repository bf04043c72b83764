import numpy as np
y = np.log(x)  # expect: R7
