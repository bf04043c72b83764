from sklearn.preprocessing import scale
from sklearn.neighbors import KNeighborsClassifier
X = scale(X)
knn = KNeighborsClassifier(n_neighbors=3)
knn.fit(X, y)
