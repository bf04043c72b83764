from sklearn.metrics import roc_auc_score
a = roc_auc_score(y, q)
