import torch
torch.manual_seed(0)
noise = torch.rand(4)
