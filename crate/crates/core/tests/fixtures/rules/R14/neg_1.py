import pandas as pd
df = pd.read_csv("a.csv")
arr = df.to_numpy()
