import torch.nn as nn

class Wrapped(nn.Linear):
    def forward(self, x):
        return super().forward(x) * 2
