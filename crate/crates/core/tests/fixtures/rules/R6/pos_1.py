import torch  # expect: R6
import torch.nn as nn
model = nn.Linear(2, 1)
for x, y in data:
    loss = ((model(x) - y) ** 2).mean()
    loss.backward()
