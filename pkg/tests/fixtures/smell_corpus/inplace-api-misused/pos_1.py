import pandas as pd

df = pd.read_csv("raw.csv", dtype=str)
df.dropna()  # smell: inplace-api-misused
print(df)
