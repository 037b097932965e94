import pandas as pd
from sklearn.ensemble import RandomForestClassifier

frame = pd.read_csv("train.csv", dtype=float)
clf = RandomForestClassifier()  # smell: hyperparameters-not-set
clf.fit(frame, frame)
