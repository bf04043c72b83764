import torch
acc = torch.zeros(0)
i = 0
while i < 10:
    acc = torch.cat([acc, step(i)])  # expect: R3
    i += 1
