import pandas as pd
df = pd.read_csv("a.csv")
m = df.merge(other, how="left", left_on="a", right_on="b")
