import pandas as pd
df = pd.read_csv("a.csv")
x = df["a"]["b"]  # expect: R20
