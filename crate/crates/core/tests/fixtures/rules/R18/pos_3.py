bad = df[df["a"] == float("nan")]  # expect: R18
