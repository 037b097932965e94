import pandas as pd

left = pd.read_csv("left.csv", dtype=str)
right = pd.read_csv("right.csv", dtype=str)
joined = left.merge(right)  # smell: merge-params-not-set
print(joined)
