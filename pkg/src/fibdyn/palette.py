"""Fixed 256-entry escape palette (RGB); the same table is listed in docs/palette.md.

No entry is pure black, so escaped pixels are always distinguishable from
inside pixels.
"""
import numpy as np

#: palette index advances this many entries per unit of smoothed escape count
STRIDE = 8

PALETTE = np.array([
    (  1,  24,  88), (  1,  26,  91), (  1,  28,  94), (  1,  30,  97),
    (  1,  32, 100), (  1,  34, 103), (  1,  36, 106), (  2,  39, 109),
    (  2,  41, 113), (  3,  43, 116), (  4,  46, 119), (  5,  48, 122),
    (  5,  51, 125), (  6,  53, 128), (  7,  56, 131), (  9,  58, 134),
    ( 10,  61, 138), ( 11,  64, 141), ( 12,  66, 144), ( 14,  69, 147),
    ( 15,  72, 150), ( 17,  75, 153), ( 18,  78, 156), ( 20,  80, 159),
    ( 21,  83, 162), ( 23,  86, 165), ( 25,  89, 168), ( 27,  92, 171),
    ( 29,  95, 174), ( 31,  98, 177), ( 33, 101, 180), ( 35, 104, 183),
    ( 37, 108, 185), ( 40, 111, 188), ( 42, 114, 191), ( 44, 117, 194),
    ( 47, 120, 196), ( 49, 123, 199), ( 52, 126, 201), ( 54, 129, 204),
    ( 57, 133, 206), ( 59, 136, 209), ( 62, 139, 211), ( 65, 142, 214),
    ( 67, 145, 216), ( 70, 148, 218), ( 73, 151, 220), ( 76, 154, 222),
    ( 79, 157, 224), ( 82, 160, 226), ( 85, 163, 228), ( 88, 166, 230),
    ( 90, 169, 232), ( 93, 172, 234), ( 97, 175, 236), (100, 178, 237),
    (103, 181, 239), (106, 184, 240), (109, 186, 242), (112, 189, 243),
    (115, 192, 244), (118, 195, 246), (121, 197, 247), (124, 200, 248),
    (128, 202, 249), (131, 205, 250), (134, 207, 251), (137, 210, 251),
    (140, 212, 252), (143, 215, 253), (146, 217, 253), (149, 219, 254),
    (152, 221, 254), (155, 223, 254), (158, 225, 255), (162, 227, 255),
    (165, 229, 255), (167, 231, 255), (170, 233, 255), (173, 235, 255),
    (176, 236, 255), (179, 238, 254), (182, 239, 254), (185, 241, 254),
    (188, 242, 253), (190, 244, 252), (193, 245, 252), (196, 246, 251),
    (198, 247, 250), (201, 248, 249), (203, 249, 248), (206, 250, 247),
    (208, 251, 246), (211, 252, 245), (213, 252, 244), (215, 253, 242),
    (218, 253, 241), (220, 254, 240), (222, 254, 238), (224, 255, 237),
    (226, 255, 235), (228, 255, 233), (230, 255, 231), (232, 255, 230),
    (234, 255, 228), (235, 255, 226), (237, 255, 224), (238, 254, 222),
    (240, 254, 219), (241, 253, 217), (243, 253, 215), (244, 252, 213),
    (245, 251, 210), (246, 251, 208), (248, 250, 205), (249, 249, 203),
    (250, 248, 200), (250, 247, 198), (251, 246, 195), (252, 245, 193),
    (253, 243, 190), (253, 242, 187), (254, 241, 184), (254, 239, 181),
    (254, 237, 179), (255, 236, 176), (255, 234, 173), (255, 232, 170),
    (255, 231, 167), (255, 229, 164), (255, 227, 161), (255, 225, 158),
    (254, 223, 155), (254, 221, 152), (254, 219, 149), (253, 216, 146),
    (253, 214, 142), (252, 212, 139), (251, 209, 136), (250, 207, 133),
    (250, 204, 130), (249, 202, 127), (248, 199, 124), (246, 197, 121),
    (245, 194, 117), (244, 191, 114), (243, 189, 111), (241, 186, 108),
    (240, 183, 105), (238, 180, 102), (237, 177,  99), (235, 175,  96),
    (234, 172,  93), (232, 169,  90), (230, 166,  87), (228, 163,  84),
    (226, 160,  81), (224, 157,  78), (222, 154,  75), (220, 151,  72),
    (218, 147,  70), (215, 144,  67), (213, 141,  64), (211, 138,  61),
    (208, 135,  59), (206, 132,  56), (203, 129,  54), (201, 126,  51),
    (198, 122,  49), (196, 119,  46), (193, 116,  44), (190, 113,  41),
    (188, 110,  39), (185, 107,  37), (182, 104,  35), (179, 101,  33),
    (176,  98,  31), (173,  95,  29), (170,  92,  27), (167,  89,  25),
    (165,  86,  23), (162,  83,  21), (158,  80,  19), (155,  77,  18),
    (152,  74,  16), (149,  71,  15), (146,  69,  13), (143,  66,  12),
    (140,  63,  11), (137,  60,   9), (134,  58,   8), (131,  55,   7),
    (128,  53,   6), (124,  50,   5), (121,  48,   4), (118,  45,   4),
    (115,  43,   3), (112,  40,   2), (109,  38,   2), (106,  36,   1),
    (103,  34,   1), (100,  32,   1), ( 97,  30,   1), ( 93,  28,   1),
    ( 90,  26,   1), ( 88,  24,   1), ( 85,  22,   1), ( 82,  20,   1),
    ( 79,  19,   1), ( 76,  17,   1), ( 73,  16,   1), ( 70,  14,   1),
    ( 67,  13,   2), ( 65,  11,   3), ( 62,  10,   3), ( 59,   9,   4),
    ( 57,   8,   5), ( 54,   7,   6), ( 52,   6,   7), ( 49,   5,   8),
    ( 47,   4,   9), ( 44,   3,  10), ( 42,   3,  11), ( 40,   2,  13),
    ( 37,   2,  14), ( 35,   1,  15), ( 33,   1,  17), ( 31,   1,  18),
    ( 29,   1,  20), ( 27,   1,  22), ( 25,   1,  24), ( 23,   1,  25),
    ( 21,   1,  27), ( 20,   1,  29), ( 18,   1,  31), ( 17,   1,  33),
    ( 15,   1,  36), ( 14,   2,  38), ( 12,   2,  40), ( 11,   3,  42),
    ( 10,   4,  45), (  9,   4,  47), (  7,   5,  50), (  6,   6,  52),
    (  5,   7,  55), (  5,   8,  57), (  4,   9,  60), (  3,  10,  62),
    (  2,  12,  65), (  2,  13,  68), (  1,  14,  71), (  1,  16,  74),
    (  1,  18,  76), (  1,  19,  79), (  1,  21,  82), (  1,  23,  85),
], dtype=np.uint8)
