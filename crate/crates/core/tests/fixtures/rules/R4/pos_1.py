import torch.nn as nn
model = nn.Linear(2, 2)
model.eval()  # expect: R4
for x in data:
    loss = model(x).sum()
    loss.backward()
