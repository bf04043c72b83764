import pandas as pd
sheet = pd.read_excel("a.xlsx")
X = sheet.values  # expect: R14
