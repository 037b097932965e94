import pandas as pd

df = pd.read_csv("raw.csv", dtype=str)
df.fillna(0)  # smell: inplace-api-misused
print(df)
