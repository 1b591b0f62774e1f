use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use suq11::coherent::{
    default_candidates, select_lattice_convention, BesselOrder, MeasureKind, MeasureSpec,
};
use suq11::qcalc::{q_bracket, QParam};
use suq11::reps::{algebra_residuals, build, casimir, RealizationKind, Sector};
use suq11::Error;

use crate::config::SweepConfig;
use crate::report::{CasimirRow, Parameters, Record, Residuals, Status};

/// One point of a sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case {
    pub kind: &'static str,
    pub q: Option<f64>,
    pub k0: Option<f64>,
    pub l: Option<f64>,
}

fn cmp_opt(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.total_cmp(&y),
    }
}

impl Case {
    fn lexicographic(&self, other: &Case) -> Ordering {
        self.kind
            .cmp(other.kind)
            .then(cmp_opt(self.q, other.q))
            .then(cmp_opt(self.k0, other.k0))
            .then(cmp_opt(self.l, other.l))
    }

    fn parameters(&self, cfg: &SweepConfig, n_max: Option<usize>) -> Parameters {
        Parameters {
            q: self.q,
            k0: self.k0,
            l: self.l,
            dim: cfg.dim,
            n_max,
        }
    }
}

/// Realization grid in the order of `cfg.kinds`. Undeformed kinds ignore q,
/// linear kinds ignore l, quadratic kinds ignore k₀.
pub fn realization_cases(cfg: &SweepConfig) -> Vec<Case> {
    let mut cases = Vec::new();
    for name in &cfg.kinds {
        let Some(kind) = RealizationKind::from_name(name) else {
            continue;
        };
        let kind_name = kind.name();
        match kind {
            RealizationKind::Quadratic => {
                cases.extend(cfg.q.iter().map(|&q| Case {
                    kind: kind_name,
                    q: Some(q),
                    k0: None,
                    l: None,
                }));
            }
            RealizationKind::Parabose => {
                for &q in &cfg.q {
                    cases.extend(cfg.l.iter().map(|&l| Case {
                        kind: kind_name,
                        q: Some(q),
                        k0: None,
                        l: Some(l),
                    }));
                }
            }
            k if k.is_classical() => {
                cases.extend(cfg.k0.iter().map(|&k0| Case {
                    kind: kind_name,
                    q: None,
                    k0: Some(k0),
                    l: None,
                }));
            }
            _ => {
                for &q in &cfg.q {
                    cases.extend(cfg.k0.iter().map(|&k0| Case {
                        kind: kind_name,
                        q: Some(q),
                        k0: Some(k0),
                        l: None,
                    }));
                }
            }
        }
    }
    cases
}

pub fn measure_cases(cfg: &SweepConfig) -> Vec<Case> {
    let mut cases = Vec::new();
    for name in &cfg.kinds {
        let Some(kind) = MeasureKind::from_name(name) else {
            continue;
        };
        let n = kind.name();
        match kind {
            MeasureKind::LiouvilleClassical => {
                cases.extend(cfg.k0.iter().map(|&k0| Case {
                    kind: n,
                    q: None,
                    k0: Some(k0),
                    l: None,
                }));
            }
            MeasureKind::GaussianClassical => cases.push(Case {
                kind: n,
                q: None,
                k0: None,
                l: None,
            }),
            MeasureKind::QLiouville => {
                for &q in &cfg.q {
                    cases.extend(cfg.k0.iter().map(|&k0| Case {
                        kind: n,
                        q: Some(q),
                        k0: Some(k0),
                        l: None,
                    }));
                }
            }
            MeasureKind::QBargmannSmallE | MeasureKind::QBargmannBigE => {
                cases.extend(cfg.q.iter().map(|&q| Case {
                    kind: n,
                    q: Some(q),
                    k0: None,
                    l: None,
                }));
            }
            MeasureKind::ParaboseBessel => {
                for &q in &cfg.q {
                    cases.extend(cfg.l.iter().map(|&l| Case {
                        kind: n,
                        q: Some(q),
                        k0: None,
                        l: Some(l),
                    }));
                }
            }
        }
    }
    cases
}

fn qparam(q: Option<f64>) -> Result<QParam, Error> {
    match q {
        Some(v) => QParam::new(v),
        None => Ok(QParam::classical()),
    }
}

fn classify(rec: &mut Record, e: &Error) {
    rec.status = match e {
        Error::Unsupported(_) => Status::Unsupported,
        _ => Status::Fail,
    };
    rec.diagnostic = Some(e.to_string());
}

fn build_case(case: &Case, cfg: &SweepConfig) -> Result<suq11::reps::Realization, Error> {
    let kind = RealizationKind::from_name(case.kind).expect("validated kind");
    build(
        kind,
        cfg.dim,
        case.k0.unwrap_or(0.0),
        qparam(case.q)?,
        case.l.unwrap_or(0.0),
    )
}

pub fn algebra_record(case: &Case, cfg: &SweepConfig) -> Record {
    let mut rec = Record::new(case.kind, case.parameters(cfg, None));
    let outcome = build_case(case, cfg).and_then(|rep| algebra_residuals(&rep));
    match outcome {
        Ok(r) => {
            let max = r.max_relation();
            rec.residuals = Some(Residuals {
                q0_plus: r.r0plus,
                q0_minus: r.r0minus,
                plus_minus: r.rpm,
                max,
                valid_block: r.valid_block,
            });
            rec.casimir_spread = Some(r.casimir_spread);
            rec.status = if max < cfg.tol_algebra && r.casimir_spread < cfg.tol_algebra {
                Status::Pass
            } else {
                Status::Fail
            };
        }
        Err(e) => classify(&mut rec, &e),
    }
    rec
}

/// Closed-form Casimir value per sector.
pub fn expected_casimir(
    kind: RealizationKind,
    sector: Sector,
    q: QParam,
    k0: f64,
    l: f64,
) -> Result<f64, Error> {
    if kind.is_quadratic() {
        let q2 = q.squared();
        let l = if kind == RealizationKind::Quadratic {
            0.0
        } else {
            l
        };
        let s = if sector == Sector::Odd { -1.0 } else { 1.0 };
        Ok(q_bracket(0.25 + s * l / 2.0, q2)? * q_bracket(-0.75 + s * l / 2.0, q2)?)
    } else {
        let q = if kind.is_classical() {
            QParam::classical()
        } else {
            q
        };
        Ok(q_bracket(k0, q)? * q_bracket(k0 - 1.0, q)?)
    }
}

fn sector_name(s: Sector) -> &'static str {
    match s {
        Sector::All => "all",
        Sector::Even => "even",
        Sector::Odd => "odd",
    }
}

pub fn casimir_record(case: &Case, cfg: &SweepConfig) -> Record {
    let mut rec = Record::new(case.kind, case.parameters(cfg, None));
    let kind = RealizationKind::from_name(case.kind).expect("validated kind");
    let outcome = build_case(case, cfg).and_then(|rep| {
        let report = casimir(&rep)?;
        let mut rows = Vec::new();
        for s in &report.sectors {
            let expected = expected_casimir(
                kind,
                s.sector,
                rep.q,
                case.k0.unwrap_or(0.0),
                case.l.unwrap_or(0.0),
            )?;
            rows.push(CasimirRow {
                sector: sector_name(s.sector).into(),
                value: s.value,
                expected,
                spread: s.spread,
            });
        }
        Ok((report.spread, rows))
    });
    match outcome {
        Ok((spread, rows)) => {
            let tol = cfg.tol_algebra;
            let ok = spread < tol
                && !rows.is_empty()
                && rows
                    .iter()
                    .all(|r| (r.value - r.expected).abs() <= tol * r.expected.abs().max(1.0));
            rec.casimir_spread = Some(spread);
            rec.casimir = rows;
            rec.status = if ok { Status::Pass } else { Status::Fail };
        }
        Err(e) => classify(&mut rec, &e),
    }
    rec
}

fn measure_spec(kind: MeasureKind, case: &Case) -> Result<MeasureSpec, Error> {
    let q = qparam(case.q)?;
    let k0 = case.k0.unwrap_or(0.0);
    match kind {
        MeasureKind::LiouvilleClassical => MeasureSpec::liouville_classical(k0),
        MeasureKind::GaussianClassical => Ok(MeasureSpec::gaussian_classical()),
        MeasureKind::QLiouville => MeasureSpec::q_liouville(k0, q),
        MeasureKind::QBargmannSmallE => Ok(MeasureSpec::q_bargmann_small_e(q)),
        MeasureKind::QBargmannBigE => Ok(MeasureSpec::q_bargmann_big_e(q)),
        MeasureKind::ParaboseBessel => {
            MeasureSpec::parabose_bessel(case.l.unwrap_or(0.0), q, BesselOrder::Classical)
        }
    }
}

/// Measures whose lattice is fixed in advance; a miss is a failure. The
/// others are adjudicated over candidate lattices and a miss is an open
/// finding.
pub fn is_guaranteed(kind: MeasureKind) -> bool {
    matches!(
        kind,
        MeasureKind::LiouvilleClassical
            | MeasureKind::GaussianClassical
            | MeasureKind::QBargmannBigE
    )
}

pub fn unity_record(case: &Case, cfg: &SweepConfig) -> Record {
    let mut rec = Record::new(case.kind, case.parameters(cfg, Some(cfg.n_max)));
    let kind = MeasureKind::from_name(case.kind).expect("validated kind");
    let spec = match measure_spec(kind, case) {
        Ok(s) => s,
        Err(e) => {
            classify(&mut rec, &e);
            return rec;
        }
    };
    let mut candidates = match default_candidates(&spec) {
        Ok(c) => c,
        Err(e) => {
            classify(&mut rec, &e);
            return rec;
        }
    };
    let guaranteed = is_guaranteed(kind);
    if guaranteed && candidates.len() > 1 {
        candidates.retain(|c| c.label == "standard");
    }
    match select_lattice_convention(
        &spec,
        &spec.family(),
        &candidates,
        cfg.n_max,
        cfg.tol_unity,
        cfg.tol_quad,
    ) {
        Ok(sel) => {
            rec.unity_residuals = sel.check.residuals;
            rec.lattice = Some(sel.candidate.label);
            rec.candidates = sel.report.candidates;
            rec.status = Status::Pass;
        }
        Err(Error::SelectionFailed(report)) => {
            let report = *report;
            if let Some(first) = report.candidates.iter().find(|c| !c.residuals.is_empty()) {
                rec.unity_residuals = first.residuals.clone();
            }
            rec.diagnostic = Some(if guaranteed {
                format!(
                    "{} lattice misses the unity tolerance {:e}",
                    candidates[0].label, cfg.tol_unity
                )
            } else {
                format!(
                    "none of {} candidate lattices reaches {:e}",
                    report.candidates.len(),
                    cfg.tol_unity
                )
            });
            rec.candidates = report.candidates;
            rec.status = if guaranteed {
                Status::Fail
            } else {
                Status::OpenFinding
            };
        }
        Err(e) => classify(&mut rec, &e),
    }
    rec
}

/// Evaluate cases in parallel; results come back in case order.
pub fn run_cases<F>(cases: &[Case], cfg: &SweepConfig, eval: F) -> Vec<(Record, f64)>
where
    F: Fn(&Case, &SweepConfig) -> Record + Sync,
{
    cases
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let rec = eval(c, cfg);
            (rec, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect()
}

/// Casimir table rows in lexicographic parameter order.
pub fn casimir_cases(cfg: &SweepConfig) -> Vec<Case> {
    let mut cases = realization_cases(cfg);
    cases.sort_by(|a, b| a.lexicographic(b));
    cases.dedup();
    cases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{KindSet, SweepArgs};

    fn cfg(kinds: &[&str], set: KindSet) -> SweepConfig {
        let args = SweepArgs {
            kinds: kinds.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        };
        SweepConfig::resolve(&args, set).unwrap().0
    }

    #[test]
    fn grid_cardinality() {
        let c = cfg(
            &["hp", "qhp", "quadratic", "parabose"],
            KindSet::Realizations,
        );
        // 4 k0 + 3 q × 4 k0 + 3 q + 3 q × 3 l
        assert_eq!(realization_cases(&c).len(), 4 + 12 + 3 + 9);
    }

    #[test]
    fn single_case_run() {
        let mut c = cfg(&["biedenharn"], KindSet::Realizations);
        c.q = vec![0.9];
        c.k0 = vec![1.0];
        let cases = realization_cases(&c);
        assert_eq!(cases.len(), 1);
        let rec = algebra_record(&cases[0], &c);
        assert_eq!(rec.status, Status::Pass, "{rec:?}");
    }

    #[test]
    fn uncovered_measure_is_unsupported() {
        let mut c = cfg(&["q_liouville"], KindSet::Measures);
        c.q = vec![0.9];
        c.k0 = vec![1.5];
        let rec = unity_record(&measure_cases(&c)[0], &c);
        assert_eq!(rec.status, Status::Unsupported);
    }

    #[test]
    fn q_liouville_names_its_lattice() {
        let mut c = cfg(&["q_liouville"], KindSet::Measures);
        c.q = vec![0.9];
        c.k0 = vec![2.0];
        let rec = unity_record(&measure_cases(&c)[0], &c);
        assert_eq!(rec.status, Status::Pass);
        assert_eq!(rec.lattice.as_deref(), Some("symmetric"));
        assert_eq!(rec.candidates.len(), 3);
    }

    #[test]
    fn classical_liouville_passes() {
        let mut c = cfg(&["liouville_classical"], KindSet::Measures);
        c.k0 = vec![2.0];
        let rec = unity_record(&measure_cases(&c)[0], &c);
        assert_eq!(rec.status, Status::Pass);
        assert_eq!(rec.unity_residuals.len(), 11);
    }

    #[test]
    fn qhp_casimir_at_k0_one_vanishes() {
        let mut c = cfg(&["qhp"], KindSet::Realizations);
        c.q = vec![0.9];
        c.k0 = vec![1.0];
        let rec = casimir_record(&casimir_cases(&c)[0], &c);
        assert_eq!(rec.status, Status::Pass);
        assert_eq!(rec.casimir[0].expected, 0.0);
        assert!(rec.casimir[0].value.abs() < 1e-11);
        assert!(rec.casimir_spread.unwrap() < 1e-11);
    }

    #[test]
    fn parabose_rows_have_two_sectors() {
        let mut c = cfg(&["parabose"], KindSet::Realizations);
        c.q = vec![0.9];
        c.l = vec![1.0];
        let rec = casimir_record(&casimir_cases(&c)[0], &c);
        assert_eq!(rec.status, Status::Pass, "{rec:?}");
        let names: Vec<&str> = rec.casimir.iter().map(|r| r.sector.as_str()).collect();
        assert_eq!(names, ["even", "odd"]);
    }

    #[test]
    fn casimir_order_is_lexicographic() {
        let c = cfg(&["qhp", "anyonic", "hp"], KindSet::Realizations);
        let cases = casimir_cases(&c);
        assert_eq!(cases[0].kind, "anyonic");
        assert_eq!(cases.last().unwrap().kind, "qhp");
        for w in cases.windows(2) {
            assert_ne!(w[0].lexicographic(&w[1]), Ordering::Greater);
        }
    }
}
