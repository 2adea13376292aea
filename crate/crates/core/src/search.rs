//! One-dimensional extremum search shared by the filter constructors and the
//! convergence-factor analysis: a dense grid scan followed by golden-section
//! refinement of the most promising bracket(s).

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Goal {
    Min,
    Max,
}

impl Goal {
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Goal::Min => a < b,
            Goal::Max => a > b,
        }
    }
}

/// Golden-section search for an extremum of a unimodal `f` on `[a, b]`.
pub(crate) fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
    goal: Goal,
) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if goal.better(fc, fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if goal.better(fc, fd) {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Global extremum of `f` on `[a, b]`: `samples + 1` equispaced evaluations,
/// then golden-section refinement around up to `refine` of the best interior
/// local extrema. Endpoints are always candidates.
pub(crate) fn grid_extremum<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    samples: usize,
    refine: usize,
    tol: f64,
    goal: Goal,
) -> (f64, f64) {
    let h = (b - a) / samples as f64;
    let xs: Vec<f64> = (0..=samples)
        .map(|i| if i == samples { b } else { a + h * i as f64 })
        .collect();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let mut best = (xs[0], fs[0]);
    for (&x, &fx) in xs.iter().zip(&fs) {
        if goal.better(fx, best.1) {
            best = (x, fx);
        }
    }

    let mut local: Vec<usize> = (1..samples)
        .filter(|&i| !goal.better(fs[i - 1], fs[i]) && !goal.better(fs[i + 1], fs[i]))
        .collect();
    local.sort_by(|&i, &j| {
        let ord = fs[i]
            .partial_cmp(&fs[j])
            .unwrap_or(std::cmp::Ordering::Equal);
        match goal {
            Goal::Min => ord,
            Goal::Max => ord.reverse(),
        }
    });
    local.truncate(refine);
    for i in local {
        let (x, fx) = golden_section(&mut f, xs[i - 1], xs[i + 1], tol, goal);
        if goal.better(fx, best.1) {
            best = (x, fx);
        }
    }
    best
}
