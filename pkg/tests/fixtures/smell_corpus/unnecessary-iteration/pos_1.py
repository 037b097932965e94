import pandas as pd

df = pd.read_csv("orders.csv", dtype=str)
total = 0
for idx, row in df.iterrows():  # smell: unnecessary-iteration
    total += int(row["amount"])
print(total)
