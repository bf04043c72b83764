from sklearn.svm import SVC
clf = SVC(C=1.0, gamma='scale', kernel='rbf', random_state=0)
