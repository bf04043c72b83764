import torch
opt = torch.optim.Adam(model.parameters())  # expect: R5
