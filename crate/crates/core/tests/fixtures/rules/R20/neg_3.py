d = {"a": {"b": 1}}
x = d["a"]["b"]
