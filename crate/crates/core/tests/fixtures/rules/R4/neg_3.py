import torch.nn as nn
model = nn.Linear(2, 2)
for x in data:
    loss = model(x).sum()
    loss.backward()
model.eval()
preds = model(test)
