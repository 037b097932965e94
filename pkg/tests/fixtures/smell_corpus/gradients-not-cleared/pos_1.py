import torch

torch.use_deterministic_algorithms(True)
model = torch.nn.Linear(4, 1)
opt = torch.optim.SGD(model.parameters(), lr=0.1)
for batch in make_batches():
    loss = model(batch).sum()
    loss.backward()  # smell: gradients-not-cleared
    opt.step()
