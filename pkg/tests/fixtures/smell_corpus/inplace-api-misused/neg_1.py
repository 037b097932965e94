import pandas as pd

df = pd.read_csv("raw.csv", dtype=str)
clean = df.dropna()
print(clean)
