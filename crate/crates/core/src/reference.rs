//! Reference values used by `reproduce --check` and the built-in
//! training datasets.

use crate::fosystems::SystemClass;
use crate::refmodel::FitCriterion;

/// One reference fit: `(alpha, j_min, tau, xi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitReference {
    pub alpha: f64,
    pub j_min: f64,
    pub tau: f64,
    pub xi: f64,
}

/// One reference network prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionReference {
    pub alpha: f64,
    pub tau: f64,
    pub xi: f64,
}

const fn f(alpha: f64, j_min: f64, tau: f64, xi: f64) -> FitReference {
    FitReference { alpha, j_min, tau, xi }
}

const fn p(alpha: f64, tau: f64, xi: f64) -> PredictionReference {
    PredictionReference { alpha, tau, xi }
}

const PSEUDO_ISE: [FitReference; 9] = [
    f(1.1, 0.0054, 0.3485, 1.3152),
    f(1.2, 0.0168, 0.5246, 0.8094),
    f(1.3, 0.0287, 0.6587, 0.596),
    f(1.4, 0.0379, 0.7634, 0.4672),
    f(1.5, 0.0429, 0.8432, 0.374),
    f(1.6, 0.0429, 0.9029, 0.2965),
    f(1.7, 0.0378, 0.9463, 0.2247),
    f(1.8, 0.0277, 0.976, 0.1527),
    f(1.9, 0.0127, 0.993, 0.0771),
];

const PSEUDO_ITSE: [FitReference; 9] = [
    f(1.1, 0.0235, 0.47, 0.9848),
    f(1.2, 0.0647, 0.6467, 0.6887),
    f(1.3, 0.0979, 0.7659, 0.5537),
    f(1.4, 0.1153, 0.8457, 0.4635),
    f(1.5, 0.1176, 0.8998, 0.3878),
    f(1.6, 0.1085, 0.9374, 0.3146),
    f(1.7, 0.0927, 0.9647, 0.239),
    f(1.8, 0.074, 0.9837, 0.1597),
    f(1.9, 0.0448, 0.9947, 0.0786),
];

const META1_ISE: [FitReference; 9] = [
    f(1.1, 0.0057, 0.3463, 1.1946),
    f(1.2, 0.0147, 0.342, 1.067),
    f(1.3, 0.0273, 0.4182, 0.7884),
    f(1.4, 0.0415, 0.4793, 0.6322),
    f(1.5, 0.0571, 0.5317, 0.5308),
    f(1.6, 0.0748, 0.5996, 0.4393),
    f(1.7, 0.097, 0.6597, 0.3708),
    f(1.8, 0.13, 0.7233, 0.3086),
    f(1.9, 0.1996, 0.7959, 0.2422),
];

const META1_ITSE: [FitReference; 9] = [
    f(1.1, 0.02, 0.4006, 1.0538),
    f(1.2, 0.0512, 0.4933, 0.7747),
    f(1.3, 0.0769, 0.5761, 0.6247),
    f(1.4, 0.0956, 0.6399, 0.5336),
    f(1.5, 0.1105, 0.6906, 0.4667),
    f(1.6, 0.1271, 0.7352, 0.4091),
    f(1.7, 0.1568, 0.7784, 0.3529),
    f(1.8, 0.2382, 0.8253, 0.2913),
    f(1.9, 0.5806, 0.8828, 0.2131),
];

const META2_ISE: [FitReference; 9] = [
    f(1.1, 0.005, 1.0426, 0.7299),
    f(1.2, 0.0138, 1.0499, 0.574),
    f(1.3, 0.0215, 1.0452, 0.4668),
    f(1.4, 0.0266, 1.0362, 0.3845),
    f(1.5, 0.0291, 1.0263, 0.3153),
    f(1.6, 0.029, 1.0171, 0.2529),
    f(1.7, 0.0266, 1.0094, 0.1931),
    f(1.8, 0.0217, 1.0042, 0.1325),
    f(1.9, 0.0119, 1.0012, 0.0679),
];

const META2_ITSE: [FitReference; 9] = [
    f(1.1, 0.0462, 1.0837, 0.712),
    f(1.2, 0.1053, 1.0939, 0.5732),
    f(1.3, 0.1359, 1.0809, 0.4809),
    f(1.4, 0.1407, 1.0609, 0.4066),
    f(1.5, 0.1315, 1.0409, 0.3395),
    f(1.6, 0.117, 1.0241, 0.2741),
    f(1.7, 0.1038, 1.012, 0.2083),
    f(1.8, 0.0935, 1.0047, 0.1405),
    f(1.9, 0.0657, 1.0012, 0.0701),
];

const PSEUDO_PRED: [PredictionReference; 9] = [
    p(1.1, 0.469965, 0.984699),
    p(1.2, 0.69043, 0.673145),
    p(1.3, 0.760275, 0.595913),
    p(1.4, 0.819033, 0.531421),
    p(1.5, 0.898188, 0.387535),
    p(1.6, 0.937233, 0.314444),
    p(1.7, 0.966328, 0.242967),
    p(1.8, 1.009048, 0.130724),
    p(1.9, 0.986992, 0.061456),
];

const META1_PRED: [PredictionReference; 9] = [
    p(1.1, 0.400597, 1.053798),
    p(1.2, 0.495297, 0.751861),
    p(1.3, 0.576102, 0.624702),
    p(1.4, 0.639898, 0.5336),
    p(1.5, 0.688546, 0.46988),
    p(1.6, 0.7352, 0.4091),
    p(1.7, 0.779042, 0.350727),
    p(1.8, 0.8253, 0.2913),
    p(1.9, 0.916861, 0.207589),
];

const META2_PRED: [PredictionReference; 9] = [
    p(1.1, 1.091173, 0.707394),
    p(1.2, 1.088813, 0.573404),
    p(1.3, 1.076325, 0.4878),
    p(1.4, 1.062211, 0.402436),
    p(1.5, 1.040513, 0.339679),
    p(1.6, 1.019453, 0.278533),
    p(1.7, 1.012378, 0.208497),
    p(1.8, 1.006116, 0.13578),
    p(1.9, 1.002982, 0.070353),
];

/// Reference GA fits for one class and criterion, α = 1.1 … 1.9.
pub fn fit_reference(class: SystemClass, criterion: FitCriterion) -> &'static [FitReference; 9] {
    match (class, criterion) {
        (SystemClass::Pseudo, FitCriterion::Ise) => &PSEUDO_ISE,
        (SystemClass::Pseudo, FitCriterion::Itse) => &PSEUDO_ITSE,
        (SystemClass::MetaLead1, FitCriterion::Ise) => &META1_ISE,
        (SystemClass::MetaLead1, FitCriterion::Itse) => &META1_ITSE,
        (SystemClass::MetaLead2, FitCriterion::Ise) => &META2_ISE,
        (SystemClass::MetaLead2, FitCriterion::Itse) => &META2_ITSE,
    }
}

/// Reference 1×5 logsig network predictions.
pub fn prediction_reference(class: SystemClass) -> &'static [PredictionReference; 9] {
    match class {
        SystemClass::Pseudo => &PSEUDO_PRED,
        SystemClass::MetaLead1 => &META1_PRED,
        SystemClass::MetaLead2 => &META2_PRED,
    }
}

/// Reference best-of-25 training MSE of the 1×5 logsig network.
pub fn prediction_min_mse(class: SystemClass) -> f64 {
    match class {
        SystemClass::Pseudo => 6.1938e-4,
        SystemClass::MetaLead1 => 9.6422e-5,
        SystemClass::MetaLead2 => 1.4428e-5,
    }
}

/// Table number used by `reproduce` for each class's fit table.
pub fn fit_table_number(class: SystemClass) -> u32 {
    match class {
        SystemClass::Pseudo => 1,
        SystemClass::MetaLead1 => 2,
        SystemClass::MetaLead2 => 3,
    }
}
