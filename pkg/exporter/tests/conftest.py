import numpy as np
import pytest
import torch
from PIL import Image


class TinyNet(torch.nn.Module):
    """Small deterministic classifier used as the checkpoint payload."""

    def __init__(self, n_classes: int):
        super().__init__()
        self.pool = torch.nn.AdaptiveAvgPool2d(4)
        self.head = torch.nn.Linear(3 * 16, n_classes)

    def forward(self, x):
        return self.head(torch.flatten(self.pool(x), 1))


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """A 100-image validation folder, two checkpoints, and a multi-label
    source file."""
    root = tmp_path_factory.mktemp("corpus")
    data = root / "val"
    rng = np.random.default_rng(7)
    classes = ["alpha", "beta", "gamma", "delta"]
    for ci, cls in enumerate(classes):
        (data / cls).mkdir(parents=True)
        for i in range(25):
            # class-dependent mean color so the task is learnable-ish
            base = np.zeros(3)
            base[ci % 3] = 0.6
            pixels = np.clip(
                rng.normal(loc=base, scale=0.25, size=(64, 64, 3)), 0, 1
            )
            img = Image.fromarray((pixels * 255).astype(np.uint8))
            img.save(data / cls / f"img{i:03d}.png")

    ckpts = root / "ckpts"
    ckpts.mkdir()
    for strength, seed in [(8.0, 0), (100.0, 0)]:
        torch.manual_seed(int(strength) * 100 + seed)
        model = TinyNet(len(classes))
        torch.save(model, ckpts / f"tiny_s{strength:g}_seed{seed}.pt")

    real = root / "real.json"
    labels = {}
    for ci, cls in enumerate(classes):
        for i in range(25):
            sample = f"{cls}/img{i:03d}.png"
            extra = [classes[(ci + 1) % len(classes)]] if i < 5 else []
            labels[sample] = [cls] + extra
    # a few samples with no valid label at all
    labels["alpha/img024.png"] = []
    real.write_text(__import__("json").dumps(labels, sort_keys=True))

    return {"data": data, "ckpts": ckpts, "real": real, "classes": classes}
