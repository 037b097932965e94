import numpy as np
import pandas as pd

a = np.ones((2, 2))
b = np.ones((2, 2))
c = np.matmul(a, b)
print(pd.DataFrame(c))
