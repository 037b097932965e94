import torch

model = torch.nn.Linear(3, 1)
output = model(torch.ones(3))
print(output)
