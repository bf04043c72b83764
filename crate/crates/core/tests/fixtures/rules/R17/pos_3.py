import pandas as pd
df = pd.read_csv("a.csv")
for i in range(len(df)):  # expect: R17
    df.loc[i, "b"] = df.loc[i, "a"] * 2
