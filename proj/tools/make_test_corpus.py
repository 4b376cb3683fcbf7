#!/usr/bin/env python3
"""Regenerates tests/data/: 512x512 grayscale hosts and a 32x32 text watermark.

Hosts come from the scikit-image sample set (public-domain / CC0 images),
converted to 8-bit luma and written as binary PGM. The output is committed,
so this only needs rerunning to change the corpus.
"""
import pathlib

import numpy as np
from PIL import Image, ImageDraw, ImageFont
from skimage import color, data

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data"


def to_gray_u8(img):
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3])
        img = np.round(img * 255.0)
    return np.clip(img, 0, 255).astype(np.uint8)


def write_pgm(path, arr):
    h, w = arr.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(arr.tobytes())


def text_watermark():
    img = Image.new("L", (32, 32), 0)
    draw = ImageDraw.Draw(img)
    font = ImageFont.load_default(size=15)
    draw.text((16, 8), "WM", fill=255, font=font, anchor="mm", stroke_width=1, stroke_fill=255)
    draw.text((16, 24), "DWT", fill=255, font=font, anchor="mm", stroke_width=1, stroke_fill=255)
    return np.where(np.array(img) >= 128, 255, 0).astype(np.uint8)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    hosts = {
        "camera": data.camera(),
        "astronaut": data.astronaut(),
        "moon": data.moon(),
        "ihc": data.immunohistochemistry(),
        "gravel": data.gravel(),
    }
    for name, img in hosts.items():
        arr = to_gray_u8(img)
        assert arr.shape == (512, 512), (name, arr.shape)
        write_pgm(OUT / f"{name}.pgm", arr)
    write_pgm(OUT / "watermark_text.pgm", text_watermark())


if __name__ == "__main__":
    main()
