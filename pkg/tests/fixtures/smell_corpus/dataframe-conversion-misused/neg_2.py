import pandas as pd

settings = load_settings()
print(settings.values)
print(pd.Series([1]))
