import pandas as pd
df = pd.read_csv("a.csv")
df["double"] = df["a"] * 2
