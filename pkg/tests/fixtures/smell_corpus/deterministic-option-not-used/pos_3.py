import torch  # file-smell: deterministic-option-not-used

weights = torch.ones(3, requires_grad=True)
total = (weights * 2).sum()
total.backward(retain_graph=True)
print(weights.grad)
