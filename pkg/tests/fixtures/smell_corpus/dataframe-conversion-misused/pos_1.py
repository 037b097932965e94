import pandas as pd

df = pd.read_csv("matrix.csv", dtype=float)
arr = df.values  # smell: dataframe-conversion-misused
print(arr)
