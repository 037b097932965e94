import numpy as np
import pandas as pd

series = pd.Series([1.0, float("nan")])
value = series.sum()
bad = value == np.nan  # smell: nan-equivalence-misused
print(bad)
