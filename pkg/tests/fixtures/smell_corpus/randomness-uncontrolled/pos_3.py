import random  # file-smell: randomness-uncontrolled

import pandas as pd

pick = random.choice(["a", "b"])
frame = pd.Series([pick])
print(frame)
