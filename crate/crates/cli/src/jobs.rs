//! Dispatch from a job to the library, producing checks and a result payload.

use cocycles::cyclic::NecklacePair;
use cocycles::derivation::verify_msz_decomposition;
use cocycles::divergence::{coboundary, div, n1_classical_cocycles, Cochain, Div, SigmaDiv};
use cocycles::linalg::{format_rational, rank, SparseMatrix, SparseVector};
use cocycles::random::random_pairs;
use cocycles::solver::{n1_coefficient, n1_recursion_sweep, solve, CochainAnsatz, Mode, SolveOptions, SolverReport, Target};
use cocycles::symplectic::{
    der_sp_basis, es_trace, es_uniqueness_solve, hom_sp_wedge3_to_h, phi_bar_3, phi_inject, phi_sample_pairs,
    sp_coboundary, wedge3_basis, EsOptions, HElement, SymplecticContext, Wedge3,
};
use cocycles::tensor::Alphabet;
use cocycles::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, JobConfig};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl CheckOutcome {
    pub fn new(name: &str, passed: bool, detail: Option<String>) -> Self {
        Self {
            name: name.to_string(),
            status: if passed { Status::Pass } else { Status::Fail },
            detail,
            counterexample: None,
        }
    }

    fn failing(name: &str, detail: String, counterexample: Value) -> Self {
        Self {
            counterexample: Some(counterexample),
            ..Self::new(name, false, Some(detail))
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

pub struct Outcome {
    pub checks: Vec<CheckOutcome>,
    pub result: Value,
}

/// Errors that are the caller's fault (exit 2) versus failed checks (exit 1).
pub fn is_usage_error(e: &Error) -> bool {
    !matches!(e, Error::Verification(_))
}

pub fn run(job: &JobConfig) -> Result<Outcome, Error> {
    match job.command {
        Command::VerifyDiv => verify_div(job),
        Command::SolveCocycles => solve_cocycles(job, job.mode, job.target),
        Command::VerifyMsz => verify_msz(job),
        Command::N1Cocycles => n1_cocycles(job),
        Command::EsTrace => es_trace_suite(job),
        Command::EsUniqueness => es_uniqueness(job),
    }
}

fn from_library(checks: &[cocycles::solver::Check]) -> Vec<CheckOutcome> {
    checks
        .iter()
        .map(|c| CheckOutcome::new(&c.name, c.passed, c.detail.clone()))
        .collect()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// Library report minus its check list, which is reported at top level.
fn payload<T: Serialize>(x: &T) -> Value {
    let mut v = to_value(x);
    if let Value::Object(m) = &mut v {
        m.remove("checks");
    }
    v
}

fn verify_div(job: &JobConfig) -> Result<Outcome, Error> {
    let alphabet = Alphabet::new(job.n)?;
    let pairs = random_pairs(job.seed, alphabet, job.max_degree as i64, job.samples);
    let mut checks = Vec::new();
    let cochains: [(&str, &dyn Cochain<NecklacePair>); 2] = [("div_cocycle", &Div), ("sigma_div_cocycle", &SigmaDiv)];
    for (name, c) in cochains {
        let residuals = job.execution.map(&pairs, |(d1, d2)| coboundary(c, d1, d2));
        let mut failure = None;
        for (i, r) in residuals.into_iter().enumerate() {
            let r = r?;
            if !r.is_zero() {
                failure = Some((i, r));
                break;
            }
        }
        checks.push(match failure {
            None => CheckOutcome::new(name, true, Some(format!("{} pairs", pairs.len()))),
            Some((i, r)) => CheckOutcome::failing(
                name,
                format!("nonzero coboundary on pair {i}"),
                json!({"n": job.n, "d1": pairs[i].0.to_string(), "d2": pairs[i].1.to_string(), "residual": r.to_string()}),
            ),
        });
    }
    let bad_degree = pairs.iter().flat_map(|(a, b)| [a, b]).find(|d| {
        let k = d.homogeneous_degree().expect("homogeneous samples");
        div(d).keys().any(|p| p.degree() as i64 != k)
    });
    checks.push(match bad_degree {
        None => CheckOutcome::new("div_degree_zero", true, None),
        Some(d) => CheckOutcome::failing(
            "div_degree_zero",
            "Div changes degree".into(),
            json!({"n": job.n, "d": d.to_string(), "value": div(d).to_string()}),
        ),
    });
    Ok(Outcome {
        checks,
        result: json!({"pairs": pairs.len(), "max_degree": job.max_degree}),
    })
}

fn run_solver(job: &JobConfig, mode: Mode, target: Target) -> Result<(CochainAnsatz, Result<SolverReport, Error>), Error> {
    let alphabet = Alphabet::new(job.n)?;
    let ansatz = CochainAnsatz::new(alphabet, mode, target, job.max_degree);
    let opts = SolveOptions {
        exec: job.execution,
        seed: job.seed,
        fresh_pairs: job.samples,
        ..SolveOptions::default()
    };
    let report = solve(&ansatz, &opts);
    match report {
        Err(e) if is_usage_error(&e) => Err(e),
        r => Ok((ansatz, r)),
    }
}

fn verification_failure(msg: String) -> Outcome {
    Outcome {
        checks: vec![CheckOutcome::failing(
            "fresh_pair_verification",
            "a kernel vector fails the cocycle identity on a fresh pair".into(),
            json!({"message": msg}),
        )],
        result: Value::Null,
    }
}

fn solve_cocycles(job: &JobConfig, mode: Mode, target: Target) -> Result<Outcome, Error> {
    let (_, report) = run_solver(job, mode, target)?;
    match report {
        Ok(r) => Ok(Outcome {
            checks: from_library(&r.checks),
            result: payload(&r),
        }),
        Err(Error::Verification(msg)) => Ok(verification_failure(msg)),
        Err(e) => Err(e),
    }
}

fn verify_msz(job: &JobConfig) -> Result<Outcome, Error> {
    let alphabet = Alphabet::new(job.n)?;
    let r = verify_msz_decomposition(alphabet, job.max_degree, job.execution)?;
    Ok(Outcome {
        checks: vec![CheckOutcome::new(
            "direct_sum",
            r.direct_sum_ok,
            Some(format!(
                "target {}, complement {}, bracket span {}",
                r.dim_target,
                r.dim_complement.map_or("-".into(), |d| d.to_string()),
                r.dim_bracket_span
            )),
        )],
        result: payload(&r),
    })
}

fn n1_cocycles(job: &JobConfig) -> Result<Outcome, Error> {
    let (ansatz, report) = run_solver(job, Mode::Full, Target::Bicyclic)?;
    let r = match report {
        Ok(r) => r,
        Err(Error::Verification(msg)) => return Ok(verification_failure(msg)),
        Err(e) => return Err(e),
    };
    let mut checks = from_library(&r.checks);
    checks.push(CheckOutcome::new("dimension", r.dimension == 3, Some(format!("dimension {}", r.dimension))));
    let sweep_total = job.max_degree.max(8) as i64;
    for c in n1_classical_cocycles(ansatz.alphabet())? {
        let name = format!("recursion[{}]", c.name());
        checks.push(match n1_recursion_sweep(sweep_total, &|s, t| n1_coefficient(&c, s as usize, t as usize)) {
            Ok(count) => CheckOutcome::new(&name, true, Some(format!("{count} instances, l + k <= {sweep_total}"))),
            Err(e) => CheckOutcome::failing(&name, e.to_string(), json!({"cocycle": c.name()})),
        });
    }
    for (i, v) in r.basis_vectors.iter().enumerate() {
        let c = ansatz.cochain::<NecklacePair>(v)?;
        let name = format!("recursion[basis {i}]");
        // k = -1 reaches c_{s+1,t}, one degree above l + k.
        let total = job.max_degree as i64 - 1;
        checks.push(match n1_recursion_sweep(total, &|s, t| n1_coefficient(&c, s as usize, t as usize)) {
            Ok(count) => CheckOutcome::new(&name, true, Some(format!("{count} instances, l + k <= {total}"))),
            Err(e) => CheckOutcome::failing(&name, e.to_string(), json!({"basis": r.basis[i]})),
        });
    }
    Ok(Outcome {
        checks,
        result: payload(&r),
    })
}

fn wedge_json(w: &Wedge3) -> Value {
    Value::String(w.to_string())
}

fn es_trace_suite(job: &JobConfig) -> Result<Outcome, Error> {
    let ctx = SymplecticContext::new(job.n)?;
    let mut checks = Vec::new();
    let wedges = wedge3_basis(ctx);

    let mut images = Vec::new();
    let mut non_symplectic = None;
    for w in &wedges {
        match phi_inject(w) {
            Ok(d) => images.push(d),
            Err(Error::NotSymplectic) => {
                non_symplectic.get_or_insert_with(|| w.clone());
            }
            Err(e) => return Err(e),
        }
    }
    checks.push(match non_symplectic {
        None => CheckOutcome::new("phi_symplectic", true, Some(format!("{} basis wedges", wedges.len()))),
        Some(w) => CheckOutcome::failing("phi_symplectic", "φ(w) is not symplectic".into(), json!({"wedge": wedge_json(&w)})),
    });

    let basis = der_sp_basis(ctx, 1)?;
    let coords = images.iter().map(|d| basis.coordinates(d)).collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<SparseVector> = coords.iter().map(|x| SparseVector::from_dense(x)).collect();
    let phi_rank = if rows.is_empty() { 0 } else { rank(&SparseMatrix::from_rows(basis.dimension(), &rows)?) };
    checks.push(CheckOutcome::new(
        "phi_injective",
        phi_rank == wedges.len(),
        Some(format!("rank {phi_rank} of {}", wedges.len())),
    ));

    let mut bar_failure = None;
    for i in 1..=job.n {
        for j in (1..=job.n).filter(|&j| j != i) {
            let w = Wedge3::basis(ctx, ctx.x(i), ctx.y(i), ctx.x(j))?;
            let got = phi_bar_3(&w);
            if got != HElement::basis(ctx.x(j)) {
                bar_failure.get_or_insert((w, got));
            }
        }
    }
    checks.push(match bar_failure {
        None => CheckOutcome::new("phi_bar_x_j", true, None),
        Some((w, got)) => CheckOutcome::failing(
            "phi_bar_x_j",
            "φ̄₃(x_i∧y_i∧x_j) differs from x_j".into(),
            json!({"wedge": wedge_json(&w), "value": ctx.format_h(&got)}),
        ),
    });

    let hom = hom_sp_wedge3_to_h(ctx)?;
    checks.push(CheckOutcome::new(
        "phi_bar_surjective",
        hom.phi_bar_rank == 2 * job.n,
        Some(format!("rank {}, kernel {}", hom.phi_bar_rank, hom.phi_bar_kernel_dimension)),
    ));
    checks.push(CheckOutcome::new(
        "hom_sp_dimension",
        hom.dimension == 1 && hom.phi_bar_is_intertwiner,
        Some(format!("dimension {}, φ̄₃ intertwines: {}", hom.dimension, hom.phi_bar_is_intertwiner)),
    ));

    let pairs = phi_sample_pairs(ctx, job.samples, job.seed)?;
    let residuals = job.execution.map(&pairs, |(d1, d2)| sp_coboundary(&es_trace, d1, d2));
    let mut failure = None;
    for (i, r) in residuals.into_iter().enumerate() {
        let r = r?;
        if !r.is_zero() {
            failure = Some((i, r));
            break;
        }
    }
    checks.push(match failure {
        None => CheckOutcome::new("trace_cocycle", true, Some(format!("{} pairs from φ(∧³H)", pairs.len()))),
        Some((i, r)) => CheckOutcome::failing(
            "trace_cocycle",
            format!("nonzero coboundary on pair {i}"),
            json!({
                "n": job.n,
                "d1": pairs[i].0.to_derivation().to_string(),
                "d2": pairs[i].1.to_derivation().to_string(),
                "residual": r.iter().map(|(k, c)| format!("{}*{}", format_rational(c), k)).collect::<Vec<_>>(),
            }),
        ),
    });

    let graded = pairs.iter().all(|(d1, d2)| {
        [d1, d2].into_iter().all(|d| match d.homogeneous_degree() {
            Some(k) => es_trace(d).keys().all(|m| m.len() == k),
            None => true,
        })
    });
    checks.push(CheckOutcome::new("trace_degree_zero", graded, None));

    Ok(Outcome {
        checks,
        result: json!({
            "wedges": wedges.len(),
            "phi_rank": phi_rank,
            "der_sp_1_dimension": basis.dimension(),
            "hom_sp": to_value(&hom),
            "pairs": pairs.len(),
        }),
    })
}

fn es_uniqueness(job: &JobConfig) -> Result<Outcome, Error> {
    let ctx = SymplecticContext::new(job.n)?;
    let opts = EsOptions {
        exec: job.execution,
        seed: job.seed,
        trace_pairs: job.samples,
        ..EsOptions::default()
    };
    match es_uniqueness_solve(ctx, job.max_degree, &opts) {
        Ok(r) => Ok(Outcome {
            checks: from_library(&r.checks),
            result: payload(&r),
        }),
        Err(Error::Verification(msg)) => Ok(verification_failure(msg)),
        Err(e) => Err(e),
    }
}
