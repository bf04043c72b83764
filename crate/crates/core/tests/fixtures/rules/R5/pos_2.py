from sklearn.ensemble import RandomForestClassifier as RFC
clf = RFC()  # expect: R5
