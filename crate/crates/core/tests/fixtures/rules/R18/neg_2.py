import pandas as pd
m = pd.isna(x)
