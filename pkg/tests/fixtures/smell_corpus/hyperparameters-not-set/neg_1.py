import pandas as pd
from sklearn.cluster import KMeans

frame = pd.read_csv("points.csv", dtype=float)
model = KMeans(n_clusters=8)
model.fit(frame)
