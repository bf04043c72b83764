import pandas as pd
df = pd.read_csv("a.csv")
df["new"] = 0  # expect: R13
