import numpy as np
for row in rows:
    r = np.repeat(row, 3)  # expect: R1
    out.append(r)
