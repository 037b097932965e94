import numpy as np  # file-smell: randomness-uncontrolled
import pandas as pd

sample = np.random.normal(size=8)
frame = pd.DataFrame({"x": sample})
print(frame)
