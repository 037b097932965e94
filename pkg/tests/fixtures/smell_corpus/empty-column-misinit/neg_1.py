import numpy as np
import pandas as pd

df = pd.read_csv("people.csv", dtype=str)
df["age"] = np.nan
print(df)
