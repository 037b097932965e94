import pandas as pd

rows = pd.read_table("plain.tsv")  # smell: columns-dtype-not-set
print(rows.shape)
