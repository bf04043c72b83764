import numpy as np
A = np.array([[1, 0], [0, 1]])
B = np.array([[2, 0], [0, 2]])
C = np.dot(A, B)  # expect: R12
