import pandas as pd

table = pd.read_csv("deep.csv", dtype=str)
value = table["a"]["b"]["c"]  # smell: chain-indexing
print(value)
