import torch

torch.use_deterministic_algorithms(True)
model = torch.nn.Linear(3, 1)
opt = torch.optim.SGD(model.parameters(), lr=0.5)
for epoch in range(5):
    opt.zero_grad()
    loss = model(torch.ones(3)).sum()
    loss.backward()
    opt.step()
