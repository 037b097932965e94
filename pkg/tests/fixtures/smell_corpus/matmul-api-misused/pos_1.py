import numpy as np
import pandas as pd

a = np.ones((2, 2))
b = np.ones((2, 2))
c = np.dot(a, b)  # smell: matmul-api-misused
print(pd.DataFrame(c))
