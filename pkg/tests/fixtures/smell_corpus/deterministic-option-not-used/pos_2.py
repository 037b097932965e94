import torch  # file-smell: deterministic-option-not-used


def train_step(model, batch):
    loss = model(batch).sum()
    loss.backward()
    return loss


print(train_step)
