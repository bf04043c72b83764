import torch.nn as nn
net = nn.Linear(2, 2)
y = net.forward(x)  # expect: R8
