//! Extended-precision reference values generated by tools/hermite_reference.py (mpmath, 50 digits).

#![allow(clippy::excessive_precision)]

/// (k, x, h_k(x)) for the normalized Hermite functions with weight e^{-x²/2}.
pub const PAPER_H_VALUES: &[(usize, f64, f64)] = &[
    (0, 0.0, 0.75112554446494248286),
    (0, 0.5, 0.66286596644247952900),
    (0, -1.75, 0.16244229118390071308),
    (0, 3.7, 0.00079977311924507943620),
    (0, -7.25, 2.8967477566741365564e-12),
    (0, 12.0, 4.0411952587686257541e-32),
    (0, 19.5, 2.0205712067197040518e-83),
    (0, 20.0, 1.0394800321282748097e-87),
    (1, 0.0, 0.0),
    (1, 0.5, 0.46871701988925172646),
    (1, -1.75, -0.40202415976665571834),
    (1, 3.7, 0.0041848849706139559461),
    (1, -7.25, -2.9700494740902415793e-11),
    (1, 12.0, 6.8581357717781278845e-31),
    (1, 19.5, 5.5721624483529734257e-82),
    (1, 20.0, 2.9400935185036536256e-86),
    (2, 0.0, -0.53112596601359845724),
    (2, 0.5, -0.23435850994462586323),
    (2, -1.75, 0.58867823394403158757),
    (2, 3.7, 0.014918549395242724035),
    (2, -7.25, 2.1328027688941131341e-10),
    (2, 12.0, 8.2011873604180112619e-30),
    (2, 19.5, 1.0851429178266880299e-80),
    (2, 20.0, 5.8728368032110481171e-85),
    (5, 0.0, 0.0),
    (5, 0.5, 0.43857509500323214479),
    (5, -1.75, 0.32054821572952687555),
    (5, 3.7, 0.18752295500902953225),
    (5, -7.25, -2.7153429672061887537e-8),
    (5, 12.0, 5.0134200878064139568e-27),
    (5, 19.5, 2.9033171174961522368e-77),
    (5, 20.0, 1.6962814290148715315e-81),
    (13, 0.0, 0.0),
    (13, 0.5, 0.18233880320670493392),
    (13, -1.75, -0.17377978132889296924),
    (13, 3.7, -0.40963077086200381914),
    (13, -7.25, -0.00021897189898688963098),
    (13, 12.0, 3.7391647616139304250e-21),
    (13, 19.5, 1.2309642041551737585e-69),
    (13, 20.0, 8.8469587151665916194e-74),
    (20, 0.0, 0.31529120094180283317),
    (20, 0.5, -0.31525671963013834263),
    (20, -1.75, 0.022686990863030169951),
    (20, 3.7, -0.33199427681507116088),
    (20, -7.25, 0.031547546886790540008),
    (20, 12.0, 5.0145516696125725696e-17),
    (20, 19.5, 6.4886174675648211857e-64),
    (20, 20.0, 5.6108560844672937815e-68),
    (50, 0.0, -0.25168329882087150397),
    (50, 0.5, -0.076969287935031972491),
    (50, -1.75, -0.055270719791533538234),
    (50, 3.7, -0.051686678508137066620),
    (50, -7.25, 0.30207184943969841268),
    (50, 12.0, 0.000035735834269945376480),
    (50, 19.5, 2.1969257487382728278e-44),
    (50, 20.0, 4.3910271825741523162e-48),
    (100, 0.0, 0.21190426776343108883),
    (100, 0.5, 0.14705450563533917898),
    (100, -1.75, 0.19713173488526590783),
    (100, 3.7, -0.0040825214956709729683),
    (100, -7.25, -0.17130651319126439317),
    (100, 12.0, -0.17506129306937828173),
    (100, 19.5, 1.1819691014974994931e-21),
    (100, 20.0, 1.1905384791679914937e-24),
    (150, 0.0, -0.19155691687391521470),
    (150, 0.5, 0.14002200665613769509),
    (150, -1.75, -0.086076529349932904498),
    (150, 3.7, -0.12482406817718980733),
    (150, -7.25, 0.17616327671184616770),
    (150, 12.0, 0.014920703195356565780),
    (150, 19.5, 4.4250044744709738576e-7),
    (150, 20.0, 3.7488395244806009761e-9),
    (200, 0.0, 0.17830093916124465452),
    (200, 0.5, -0.14850825789624700257),
    (200, -1.75, -0.16150547604826424437),
    (200, 3.7, -0.028411374811525125896),
    (200, -7.25, -0.15522152900432546555),
    (200, 12.0, 0.077335120134146802016),
    (200, 19.5, 0.26454512080825652955),
    (200, 20.0, 0.28836494802620564229),
];

/// Σ_{k≤20} ĥ_k(0.5 + 0.3i) / (k + 1), ĥ_k(x) = 2^{1/4} h_k(√2 x).
pub const SYNTHESIS_AT_05_03: (f64, f64) = (1.0327278152843024789, 0.098811137222189223046);
