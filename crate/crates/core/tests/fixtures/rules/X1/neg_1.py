import pandas as pd
df = pd.read_csv("a.csv", index_col=0)
