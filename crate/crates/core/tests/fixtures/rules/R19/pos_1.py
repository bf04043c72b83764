from sklearn.metrics import f1_score
s = f1_score(y, p)  # expect: R19
