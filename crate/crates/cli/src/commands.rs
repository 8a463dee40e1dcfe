use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Value};
use smaps::epr::{self, Direction};
use smaps::measure::{self, QUOTED_ALICE_BITS};
use smaps::tensor::{self, partial_trace_matrix, ComplexMatrix, DensityOperator, MultiVector, Side};
use smaps::{modular, phi, random, teleport};

use crate::error::{CliError, Result};
use crate::io::{self, OperatorFile, StateFile};
use crate::report::RunReport;

pub struct Context {
    pub seed: u64,
    pub tol: Option<f64>,
}

impl Context {
    /// The user-supplied tolerance, or the check's own default.
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

fn load_state(path: &Path, report: &mut RunReport, key: &str) -> Result<MultiVector> {
    let file = StateFile::load(path)?;
    report.input(key, io::echo_state(path, &file));
    file.to_vector()
}

fn load_bipartite(path: &Path, report: &mut RunReport, key: &str) -> Result<MultiVector> {
    let v = load_state(path, report, key)?;
    v.require_factors(2)?;
    Ok(v)
}

fn load_operator(path: &Path, report: &mut RunReport, key: &str) -> Result<(Vec<usize>, ComplexMatrix)> {
    let file = OperatorFile::load(path)?;
    report.input(key, io::echo_operator(path, &file));
    let m = file.to_matrix()?;
    Ok((file.dims, m))
}

fn f64s(v: &[f64]) -> Value {
    json!(v)
}

pub fn epr(ctx: &Context, state: &Path, phi_a: &Path) -> Result<RunReport> {
    let mut r = RunReport::new("epr", ctx.seed);
    let psi = load_bipartite(state, &mut r, "state")?;
    let x = load_state(phi_a, &mut r, "phi_a")?;
    let (da, db) = (psi.dims()[0], psi.dims()[1]);

    let collapse = epr::epr_collapse(&psi, x.amplitudes())?;
    let amps = psi.amplitudes();
    let oracle: Vec<Complex64> = (0..db)
        .map(|k| (0..da).map(|i| x.amplitudes()[i].conj() * amps[i * db + k]).sum())
        .collect();
    let rho_a = epr::reduced_density(&psi, Side::A)?;
    let rho_b = epr::reduced_density(&psi, Side::B)?;
    let proj = psi.projector();
    let schmidt = epr::schmidt_coefficients(&psi)?;

    r.output("probability", json!(collapse.probability))
        .output("bob", io::vector(&collapse.bob));
    let normalized = if collapse.probability > 0.0 {
        let n = collapse.probability.sqrt();
        io::vector(&collapse.bob.iter().map(|z| z / n).collect::<Vec<_>>())
    } else {
        Value::Null
    };
    r.output("bob_normalized", normalized)
        .output("schmidt_coefficients", f64s(&schmidt))
        .output("schmidt_rank", json!(schmidt.iter().filter(|&&s| s > smaps::tol::RANK).count()))
        .output("rho_a", io::matrix(rho_a.matrix()))
        .output("rho_b", io::matrix(rho_b.matrix()))
        .output("tightness_deficit", json!(epr::tightness_deficit(&psi)?));

    r.residual(
        "collapse vs projection",
        tensor::max_abs_diff(&collapse.bob, &oracle),
        ctx.tol(1e-10),
    );
    for (name, rho, side) in [("rho_a vs partial trace", &rho_a, Side::A), ("rho_b vs partial trace", &rho_b, Side::B)] {
        let o = partial_trace_matrix(&proj, [da, db], side)?;
        r.residual(name, rho.matrix().max_abs_diff(&o), ctx.tol(1e-10));
    }
    Ok(r)
}

pub fn teleport(ctx: &Context, links: &[PathBuf], phi_a: Option<&Path>, samples: usize) -> Result<RunReport> {
    let mut r = RunReport::new("teleport", ctx.seed);
    if links.len() < 2 || links.len() % 2 != 0 {
        return Err(CliError::Input(format!(
            "need an even number (>= 2) of link states, got {}",
            links.len()
        )));
    }
    let mut vs = Vec::with_capacity(links.len());
    for (k, p) in links.iter().enumerate() {
        vs.push(load_bipartite(p, &mut r, &format!("link_{k}"))?);
    }
    if let Some(p) = phi_a {
        load_state(p, &mut r, "phi_a")?;
    }
    r.input("random", json!(samples));

    let t = teleport::chain_tmap(&vs)?;
    let da = t.cols();
    let rank = tensor::svd(&t)?.rank(smaps::tol::COMPLETE_ENTANGLEMENT);
    r.output("tmap", io::matrix(&t)).output("rank", json!(rank));

    let mut worst = 0.0f64;
    let mut check = |x: &[Complex64]| -> Result<f64> {
        let out = t.apply(x)?;
        let o = teleport::chain_oracle(x, &vs)?;
        let p = tensor::norm(&out).powi(2);
        worst = worst
            .max(tensor::max_abs_diff(&out, &o.output))
            .max((p - o.probability).abs());
        Ok(p)
    };

    let mut basis_probs = Vec::with_capacity(da);
    for k in 0..da {
        let mut e = vec![Complex64::new(0.0, 0.0); da];
        e[k] = Complex64::new(1.0, 0.0);
        basis_probs.push(check(&e)?);
    }

    let mut phi_out = None;
    if let Some(p) = phi_a {
        let x = StateFile::load(p)?.to_vector()?;
        if x.len() != da {
            return Err(CliError::Input(format!("phi_a has length {}, expected {da}", x.len())));
        }
        let prob = check(x.amplitudes())?;
        phi_out = Some((t.apply(x.amplitudes())?, prob));
    }

    let mut sampled = Vec::with_capacity(samples);
    let mut rng = random::rng(ctx.seed);
    for _ in 0..samples {
        let x = random::unit_vector(&mut rng, da);
        sampled.push(check(&x)?);
    }

    r.output("basis_probabilities", f64s(&basis_probs));
    if let Some((out, prob)) = phi_out {
        r.output("phi_out", io::vector(&out)).output("probability", json!(prob));
    }
    if samples > 0 {
        let mean = sampled.iter().sum::<f64>() / samples as f64;
        let min = sampled.iter().copied().fold(f64::INFINITY, f64::min);
        let max = sampled.iter().copied().fold(0.0, f64::max);
        r.output("random_probabilities", json!({ "count": samples, "min": min, "mean": mean, "max": max }));
    }
    r.residual("t-map vs projection oracle", worst, ctx.tol(1e-10));
    Ok(r)
}

pub fn swap(ctx: &Context, bc: &Path, de: &Path, cd: &Path) -> Result<RunReport> {
    let mut r = RunReport::new("swap", ctx.seed);
    let phi_bc = load_bipartite(bc, &mut r, "phi_bc")?;
    let phi_de = load_bipartite(de, &mut r, "phi_de")?;
    let psi_cd = load_bipartite(cd, &mut r, "psi_cd")?;
    let s = teleport::entanglement_swap(&phi_bc, &phi_de, &psi_cd)?;
    let (o, factorization) = teleport::swap_oracle(&phi_bc, &phi_de, &psi_cd)?;
    r.output("phi_be", io::state(&s.phi_be))
        .output("probability", json!(s.probability));
    if s.probability > 0.0 {
        let n = s.phi_be.normalized()?;
        r.output("schmidt_coefficients", f64s(&epr::schmidt_coefficients(&n)?));
    }
    let diff = s.phi_be.max_abs_diff(&o.phi_be).max((s.probability - o.probability).abs());
    r.residual("swap vs projection oracle", diff, ctx.tol(1e-10))
        .residual("oracle factorization", factorization, ctx.tol(smaps::tol::FACTORIZATION));
    Ok(r)
}

pub fn rearrange(ctx: &Context, pairs: &[PathBuf]) -> Result<RunReport> {
    let mut r = RunReport::new("rearrange", ctx.seed);
    if pairs.is_empty() {
        return Err(CliError::Input("need at least one pair".into()));
    }
    let mut vs = Vec::with_capacity(pairs.len());
    for (k, p) in pairs.iter().enumerate() {
        vs.push(load_bipartite(p, &mut r, &format!("pair_{k}"))?);
    }
    let lemma = teleport::rearranged_smap(&vs)?;
    let v = teleport::rearrange(&vs)?;
    let direct = epr::smap(&v, Direction::AB)?;
    r.output("rearranged", io::state(&v)).output("s_ab", io::matrix(lemma.matrix()));
    r.residual(
        "tensor of s-maps vs s-map of permuted vector",
        lemma.matrix().max_abs_diff(direct.matrix()),
        ctx.tol(1e-10),
    );
    Ok(r)
}

pub fn modular(ctx: &Context, state: &Path) -> Result<RunReport> {
    let mut r = RunReport::new("modular", ctx.seed);
    let psi = load_bipartite(state, &mut r, "state")?;
    modular::require_complete_entanglement(&psi)?;
    let d = psi.dims()[0];
    let j = modular::jmaps(&psi)?;
    let big_j = modular::modular_conjugation(&psi)?;
    let s = modular::s_operator(&psi)?;
    let delta = modular::modular_operator(&psi)?;
    let a = random::ginibre(&mut random::rng(ctx.seed), d, d);
    let id = ComplexMatrix::identity(d * d);

    r.output("schmidt_coefficients", f64s(&epr::schmidt_coefficients(&psi)?))
        .output("j_ba", io::matrix(j.j_ba.matrix()))
        .output("j_ab", io::matrix(j.j_ab.matrix()))
        .output("J", io::matrix(big_j.matrix()))
        .output("S", io::matrix(s.matrix()))
        .output("Delta", io::matrix(&delta));
    r.residual("polar factors", modular::polar_residual(&psi)?, ctx.tol(1e-10))
        .residual("J^2 - 1", big_j.compose_anti(&big_j)?.max_abs_diff(&id), ctx.tol(1e-10))
        .residual("S - J Delta^1/2", modular::polar_s_residual(&psi)?, ctx.tol(1e-9))
        .residual("S^2 - 1", s.compose_anti(&s)?.max_abs_diff(&id), ctx.tol(1e-9))
        .residual("(A x 1)psi - S(A* x 1)psi, random A", modular::s_identity_residual(&psi, &a)?, ctx.tol(1e-9));
    Ok(r)
}

pub fn phi(ctx: &Context, rho: &Path, proj: &Path) -> Result<RunReport> {
    let mut r = RunReport::new("phi", ctx.seed);
    let (dims, m) = load_operator(rho, &mut r, "rho")?;
    let (pdims, p) = load_operator(proj, &mut r, "projector")?;
    if dims.len() != 2 {
        return Err(CliError::Input(format!("rho needs two factors, got dims {dims:?}")));
    }
    let dims = [dims[0], dims[1]];
    if pdims != [dims[0]] {
        return Err(CliError::Input(format!(
            "projector dims {pdims:?} do not match the first factor {}",
            dims[0]
        )));
    }
    let rho = DensityOperator::normalized(m)?;
    let update = phi::lueders_remote(&rho, dims, &p)?;
    let oracle = phi::lueders_oracle(&rho, dims, &p)?;
    r.output("probability", json!(update.probability))
        .output("omega_b", io::matrix(&update.omega_b));
    if update.probability > 0.0 {
        r.output("omega_b_normalized", io::matrix(&update.omega_b.scale_real(1.0 / update.probability)));
    }

    let mut rng = random::rng(ctx.seed);
    let x = random::ginibre(&mut rng, dims[0], dims[0]);
    let y = random::ginibre(&mut rng, dims[1], dims[1]);
    let bound = phi::trace_norm_bound_check(&rho, dims, &x)?;
    r.output("trace_norm_bound", json!({ "lhs": bound.lhs, "rhs": bound.rhs, "holds": bound.holds }));
    let diff = update
        .omega_b
        .max_abs_diff(&oracle.omega_b)
        .max((update.probability - oracle.probability).abs());
    r.residual("remote update vs bipartite oracle", diff, ctx.tol(1e-10))
        .residual("duality, random X and Y", phi::duality_residual(&rho, dims, &x, &y)?, ctx.tol(1e-10))
        .residual("trace-norm bound excess", (bound.lhs - bound.rhs).max(0.0), ctx.tol(1e-10));
    Ok(r)
}

pub fn sorkin(ctx: &Context, q: Option<f64>, scan: Option<f64>) -> Result<RunReport> {
    let mut r = RunReport::new("sorkin", ctx.seed);
    let quoted_note = |h: f64| {
        format!(
            "H(q, 1-q) computed as {h:.4}; the quoted per-letter figure {QUOTED_ALICE_BITS} does not match H(2/5, 3/5)"
        )
    };
    match (q, scan) {
        (Some(q), None) => {
            r.input("q", json!(q));
            let ch = measure::sorkin_channel(q)?;
            let states: Vec<Value> = ch.bob_ensemble.states().iter().map(|s| io::matrix(s.matrix())).collect();
            let h = measure::alice_entropy(q)?;
            r.output("bob_states", json!(states))
                .output("bob_probs", f64s(ch.bob_ensemble.probs()))
                .output("intermediate_weights", f64s(&ch.intermediate_weights))
                .output("protocol_map", io::matrix(&ch.protocol_map))
                .output("channel_check", json!(ch.channel_check))
                .output("coherent_residue", json!(ch.coherent_residue))
                .output("chi", json!(measure::chi(q)?))
                .output("holevo", json!(measure::holevo_bound(&ch.bob_ensemble)?))
                .output("alice_entropy", json!(h))
                .output("note", json!(quoted_note(h)));
            r.residual("encoded protocol vs target qubit map", ch.channel_residual, ctx.tol(1e-12));
            r.residual(
                "Holevo vs chi(q)",
                (measure::holevo_bound(&ch.bob_ensemble)? - measure::chi(q)?).abs(),
                ctx.tol(1e-10),
            );
        }
        (None, Some(step)) => {
            r.input("scan", json!(step));
            let (q_star, chi_star) = measure::sorkin_optimum(step)?;
            let h = measure::alice_entropy(q_star)?;
            r.output("q_star", json!(q_star))
                .output("chi_star", json!(chi_star))
                .output("alice_entropy", json!(h))
                .output("note", json!(quoted_note(h)));
            // at the optimum d chi/dq = log2((2 - q)/q)/2 - 1 vanishes
            let slope = 0.5 * ((2.0 - q_star) / q_star).log2() - 1.0;
            r.residual("stationarity of chi at q*", slope.abs(), ctx.tol(1e-6));
        }
        _ => return Err(CliError::Input("give exactly one of --q or --scan".into())),
    }
    Ok(r)
}

fn bell() -> MultiVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| Complex64::new(x, 0.0);
    MultiVector::new(vec![2, 2], vec![c(h), c(0.0), c(0.0), c(h)]).expect("valid")
}

/// Seeded run of the invariant suite across all modules.
pub fn selftest(ctx: &Context, instances: usize) -> Result<RunReport> {
    let mut r = RunReport::new("selftest", ctx.seed);
    r.input("instances", json!(instances));
    let mut rng = random::rng(ctx.seed);
    let mut worst = vec![0.0f64; 14];
    let mut bump = |k: usize, v: f64| worst[k] = worst[k].max(v);
    for i in 0..instances {
        let (da, db) = (2 + i % 3, 2 + (i / 3) % 4);
        let psi = random::haar_state(&mut rng, &[da, db]);
        let fa = random::unit_vector(&mut rng, da);
        let fb = random::unit_vector(&mut rng, db);
        let direct = tensor::inner(&tensor::kron_vec(&fa, &fb), psi.amplitudes());
        let via = tensor::inner(&fb, &epr::smap(&psi, Direction::BA)?.apply(&fa)?);
        bump(0, (direct - via).norm());
        for side in [Side::A, Side::B] {
            let o = partial_trace_matrix(&psi.projector(), [da, db], side)?;
            bump(1, epr::reduced_density(&psi, side)?.matrix().max_abs_diff(&o));
        }

        let phi_bc = random::haar_state(&mut rng, &[db, 2]);
        let t = teleport::tmap(&psi, &phi_bc)?;
        let o = teleport::teleport_oracle(&fa, &psi, &phi_bc)?;
        bump(2, tensor::max_abs_diff(&t.output(&fa)?, &o.output));

        let links: Vec<_> = (0..4).map(|_| random::haar_state(&mut rng, &[2, 2])).collect();
        let x = random::unit_vector(&mut rng, 2);
        let chain = teleport::chain_tmap(&links)?;
        bump(3, tensor::max_abs_diff(&chain.apply(&x)?, &teleport::chain_oracle(&x, &links)?.output));
        let s = teleport::entanglement_swap(&links[0], &links[1], &links[2])?;
        let (so, _) = teleport::swap_oracle(&links[0], &links[1], &links[2])?;
        bump(4, s.phi_be.max_abs_diff(&so.phi_be));
        let pairs = &links[..1 + i % 3];
        let lemma = teleport::rearranged_smap(pairs)?;
        let direct = epr::smap(&teleport::rearrange(pairs)?, Direction::AB)?;
        bump(5, lemma.matrix().max_abs_diff(direct.matrix()));

        let sq = random::haar_state(&mut rng, &[da, da]);
        let a = random::ginibre(&mut rng, da, da);
        bump(6, modular::polar_residual(&psi)?);
        bump(7, modular::s_identity_residual(&sq, &a)?);
        bump(8, modular::polar_s_residual(&sq)?);
        let b = modular::expectation_transfer(&sq, &a)?;
        bump(9, modular::transfer_residuals(&sq, &a, &b)?.expectation);

        let rho = random::density(&mut rng, da * db);
        let xa = random::ginibre(&mut rng, da, da);
        let yb = random::ginibre(&mut rng, db, db);
        bump(10, phi::duality_residual(&rho, [da, db], &xa, &yb)?);
        let p = random::projector(&mut rng, da, 1 + i % da);
        let u = phi::lueders_remote(&rho, [da, db], &p)?;
        bump(11, u.omega_b.max_abs_diff(&phi::lueders_oracle(&rho, [da, db], &p)?.omega_b));
        let tm = random::ginibre(&mut rng, 4, 4);
        let back = phi::jamiolkowski_t(&phi::jamiolkowski_rho(&tm, &bell())?, &bell())?;
        bump(12, back.max_abs_diff(&tm));
    }
    let ch = measure::sorkin_channel(0.4)?;
    bump(13, ch.channel_residual);
    let (q_star, chi_star) = measure::sorkin_optimum(1e-3)?;
    r.output("q_star", json!(q_star)).output("chi_star", json!(chi_star));

    let names: [(&str, f64); 14] = [
        ("overlap identity", 1e-10),
        ("reduced states vs partial trace", 1e-10),
        ("t-map vs projection oracle", 1e-10),
        ("4-link chain vs 32-dim oracle", 1e-10),
        ("swap vs projection oracle", 1e-10),
        ("rearrangement lemma", 1e-10),
        ("polar factors", 1e-10),
        ("S defining identity", 1e-9),
        ("S - J Delta^1/2", 1e-9),
        ("expectation transfer", 1e-10),
        ("Phi duality", 1e-10),
        ("remote Lueders vs oracle", 1e-10),
        ("Jamiolkowski round trip", 1e-9),
        ("inverse-EPR qubit map", 1e-12),
    ];
    for ((name, tol), v) in names.iter().zip(&worst) {
        r.residual(name, *v, ctx.tol(*tol));
    }
    r.residual("q* - 2/5", (q_star - 0.4).abs(), ctx.tol(1e-3));
    Ok(r)
}
