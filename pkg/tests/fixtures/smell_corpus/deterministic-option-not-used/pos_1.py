import torch  # file-smell: deterministic-option-not-used

model = torch.nn.Linear(3, 1)
loss = model(torch.ones(3)).sum()
loss.backward()
print(loss)
