import numpy as np
import pandas as pd

data = pd.Series([1.0, 2.0])
total = data.sum()
print(np.isnan(total))
