import pandas as pd

df = pd.read_csv("semi.csv", sep=";")  # smell: columns-dtype-not-set
print(df.shape)
