import pandas as pd

df = pd.read_csv("raw.csv", dtype=str)
df.sort_values("a")  # smell: inplace-api-misused
print(df)
