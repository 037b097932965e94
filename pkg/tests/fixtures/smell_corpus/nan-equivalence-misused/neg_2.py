import pandas as pd

data = pd.Series([0.0, 2.0])
if data.sum() == 0:
    print("empty")
