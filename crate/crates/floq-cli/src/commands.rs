//! Subcommand implementations. Each builds its full output as a string;
//! `run` writes it to the requested sink.

use crate::output::{emit, json_doc, Meta};
use crate::{Cli, CliError, Cmd, FormatArg, LayoutArg};
use floq::clifford::GateSpec;
use floq::connectivity::{infection_closure, Partition, Rule};
use floq::diagnostics::{
    build_region, entropy_series, lyapunov_abscissa, lyapunov_fit, lyapunov_sweep, opsize_series,
    plateau_window,
};
use floq::floquet::FloquetCircuit;
use floq::hp::{general_recovery_time, nonmonotonicity_flags, recovery_boundary, recovery_scan};
use floq::lattice::{perm_map, qubit_permutation, Layout};
use floq::pauli::{Pauli, PauliVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::collections::BTreeSet;

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let text = match cli.cmd {
        Cmd::Partition => cmd_partition(cli)?,
        Cmd::Infect => cmd_infect(cli)?,
        Cmd::Opsize => cmd_opsize(cli)?,
        Cmd::Entropy => cmd_entropy(cli)?,
        Cmd::Hp => cmd_hp(cli)?,
        Cmd::ScanNonmono => cmd_scan_nonmono(cli)?,
        Cmd::Lyapunov => cmd_lyapunov(cli)?,
        Cmd::Validate => cmd_validate(cli)?,
    };
    emit(cli.out.as_deref(), &text)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Config plumbing
// ---------------------------------------------------------------------------

fn single_n(cli: &Cli) -> Result<usize, CliError> {
    match cli.n.as_slice() {
        [n] => Ok(*n),
        [] => Err(CliError::Config("missing -N <side>".into())),
        _ => Err(CliError::Config(
            "this command takes exactly one -N value".into(),
        )),
    }
}

fn rule(cli: &Cli) -> Result<Rule, CliError> {
    Ok(cli.rule.parse::<Rule>()?)
}

fn layout(cli: &Cli, n: usize) -> Result<Layout, CliError> {
    Ok(match cli.layout {
        LayoutArg::Single => Layout::single(n)?,
        LayoutArg::Double => Layout::double(n)?,
    })
}

fn layout_name(cli: &Cli) -> &'static str {
    match cli.layout {
        LayoutArg::Single => "single",
        LayoutArg::Double => "double",
    }
}

fn gate(cli: &Cli) -> Result<GateSpec, CliError> {
    let name = cli.gate.trim();
    Ok(match name.to_ascii_lowercase().as_str() {
        "w" => GateSpec::w(),
        "w_new" => GateSpec::w_new(),
        _ => name.parse::<GateSpec>()?,
    })
}

fn circuit(cli: &Cli, n: usize) -> Result<FloquetCircuit, CliError> {
    Ok(FloquetCircuit::new(
        layout(cli, n)?,
        rule(cli)?,
        gate(cli)?,
    )?)
}

/// Explicit `--refs`, or `want` distinct qubits from the seeded sampler.
fn pick_refs(cli: &Cli, total: usize, want: usize) -> Result<Vec<usize>, CliError> {
    if let Some(refs) = &cli.refs {
        if refs.is_empty() {
            return Err(CliError::Config("--refs must not be empty".into()));
        }
        for &q in refs {
            if q >= total {
                return Err(CliError::Config(format!(
                    "reference qubit {q} out of range for {total} qubits"
                )));
            }
        }
        return Ok(refs.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut set = BTreeSet::new();
    while set.len() < want.min(total) {
        set.insert(rng.random_range(0..total));
    }
    Ok(set.into_iter().collect())
}

fn base_meta(cli: &Cli, command: &str, n: usize) -> Meta {
    let mut meta = Meta::new(command);
    meta.push("layout", layout_name(cli));
    meta.push("N", n);
    meta.push("rule", &cli.rule);
    meta.push("gate", cli.gate.trim());
    meta.push("seed", cli.seed);
    meta.push("rng", "chacha8");
    meta
}

fn base_json(cli: &Cli, command: &str, n: usize) -> serde_json::Value {
    json!({
        "command": command,
        "layout": layout_name(cli),
        "N": n,
        "rule": cli.rule,
        "gate": cli.gate.trim(),
        "seed": cli.seed,
        "rng": "chacha8",
    })
}

fn merge(mut base: serde_json::Value, extra: serde_json::Value) -> serde_json::Value {
    let obj = base.as_object_mut().unwrap();
    for (k, v) in extra.as_object().unwrap() {
        obj.insert(k.clone(), v.clone());
    }
    base
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_partition(cli: &Cli) -> Result<String, CliError> {
    let n = single_n(cli)?;
    let layout = layout(cli, n)?;
    let partition = Partition::build(layout, rule(cli)?)?;
    partition.validate()?;
    let labels: Vec<Vec<String>> = partition
        .subsets()
        .iter()
        .map(|s| s.iter().map(|&q| layout.site_label(q)).collect())
        .collect();
    Ok(match cli.format {
        FormatArg::Csv => {
            let mut meta = base_meta(cli, "partition", n);
            meta.push("subsets", labels.len());
            meta.push("valid", true);
            let rows: Vec<String> = labels.iter().map(|s| s.join(" ")).collect();
            meta.csv("members", &rows)
        }
        FormatArg::Json => json_doc(&merge(
            base_json(cli, "partition", n),
            json!({ "count": labels.len(), "valid": true, "subsets": labels }),
        )),
    })
}

fn cmd_infect(cli: &Cli) -> Result<String, CliError> {
    let n = single_n(cli)?;
    let layout = layout(cli, n)?;
    let partition = Partition::build(layout, rule(cli)?)?;
    let perm = qubit_permutation(layout);
    let refs = pick_refs(cli, layout.total_qubits(), 1)?;
    let t_max = cli.tmax.unwrap_or(20);
    let run = infection_closure(&partition, &perm, &refs, t_max)?;
    Ok(match cli.format {
        FormatArg::Csv => {
            let mut meta = base_meta(cli, "infect", n);
            meta.push_list("refs", &refs);
            meta.push("tmax", t_max);
            meta.push("fixpoint", run.fixpoint);
            let rows: Vec<String> = run
                .sizes
                .iter()
                .enumerate()
                .map(|(t, c)| format!("{t},{c}"))
                .collect();
            meta.csv("t,count", &rows)
        }
        FormatArg::Json => json_doc(&merge(
            base_json(cli, "infect", n),
            json!({ "refs": refs, "t_max": t_max, "fixpoint": run.fixpoint, "sizes": run.sizes }),
        )),
    })
}

fn cmd_opsize(cli: &Cli) -> Result<String, CliError> {
    let n = single_n(cli)?;
    let circuit = circuit(cli, n)?;
    let total = circuit.total_qubits();
    let refs = pick_refs(cli, total, 1)?;
    if refs.len() != 1 {
        return Err(CliError::Config(
            "opsize takes exactly one reference qubit".into(),
        ));
    }
    let q = refs[0];
    let t_max = cli.tmax.unwrap_or_else(|| plateau_window(total).1);
    let x = opsize_series(&circuit, &PauliVec::single(total, q, Pauli::X)?, t_max);
    let z = opsize_series(&circuit, &PauliVec::single(total, q, Pauli::Z)?, t_max);
    Ok(match cli.format {
        FormatArg::Csv => {
            let mut meta = base_meta(cli, "opsize", n);
            meta.push_list("refs", &refs);
            meta.push("tmax", t_max);
            let rows: Vec<String> = (0..=t_max)
                .map(|t| format!("{t},{},{}", x[t], z[t]))
                .collect();
            meta.csv("t,n_x,n_z", &rows)
        }
        FormatArg::Json => json_doc(&merge(
            base_json(cli, "opsize", n),
            json!({ "reference": q, "t_max": t_max, "n_x": x, "n_z": z }),
        )),
    })
}

fn cmd_entropy(cli: &Cli) -> Result<String, CliError> {
    let n = single_n(cli)?;
    let circuit = circuit(cli, n)?;
    let total = circuit.total_qubits();
    let refs = pick_refs(cli, total, 1)?;
    if refs.len() != 1 {
        return Err(CliError::Config(
            "entropy takes exactly one reference qubit".into(),
        ));
    }
    let q = refs[0];
    let rlist = cli.rlist.clone().unwrap_or_else(|| vec![total / 4]);
    let t_max = cli.tmax.unwrap_or(40);
    let mut regions = Vec::new();
    for &r in &rlist {
        let region = build_region(&circuit, q, r)?;
        let series = entropy_series(&circuit, &region.qubits, t_max)?;
        regions.push((r, region, series));
    }
    Ok(match cli.format {
        FormatArg::Csv => {
            let mut meta = base_meta(cli, "entropy", n);
            meta.push_list("refs", &refs);
            meta.push_list("rlist", &rlist);
            meta.push("tmax", t_max);
            for (r, region, _) in &regions {
                meta.push(format!("t_f_r{r}"), region.t_f);
            }
            let mut rows = Vec::new();
            for (r, _, series) in &regions {
                for (t, s) in series.iter().enumerate() {
                    rows.push(format!("{r},{t},{s}"));
                }
            }
            meta.csv("r,t,S_A", &rows)
        }
        FormatArg::Json => {
            let regions: Vec<serde_json::Value> = regions
                .iter()
                .map(|(r, region, series)| {
                    json!({
                        "r": r,
                        "t_f": region.t_f,
                        "qubits": region.qubits,
                        "series": series,
                    })
                })
                .collect();
            json_doc(&merge(
                base_json(cli, "entropy", n),
                json!({ "reference": q, "t_max": t_max, "regions": regions }),
            ))
        }
    })
}

struct HpInputs {
    n: usize,
    circuit: FloquetCircuit,
    refs: Vec<usize>,
    rlist: Vec<usize>,
    t_max: usize,
    boundary: usize,
}

fn hp_inputs(cli: &Cli) -> Result<HpInputs, CliError> {
    let n = single_n(cli)?;
    let circuit = circuit(cli, n)?;
    let total = circuit.total_qubits();
    let boundary = recovery_boundary(total);
    let refs = pick_refs(cli, total, 5)?;
    let rlist = cli
        .rlist
        .clone()
        .unwrap_or_else(|| (1..=boundary).collect());
    let t_max = cli.tmax.unwrap_or(10);
    Ok(HpInputs {
        n,
        circuit,
        refs,
        rlist,
        t_max,
        boundary,
    })
}

fn cmd_hp(cli: &Cli) -> Result<String, CliError> {
    let HpInputs {
        n,
        circuit,
        refs,
        rlist,
        t_max,
        boundary,
    } = hp_inputs(cli)?;
    let entries = recovery_scan(&circuit, &refs, &rlist, t_max)?;
    Ok(match cli.format {
        FormatArg::Csv => {
            let mut meta = base_meta(cli, "hp", n);
            meta.push_list("refs", &refs);
            meta.push_list("rlist", &rlist);
            meta.push("tmax", t_max);
            meta.push("boundary", boundary);
            let rows: Vec<String> = entries
                .iter()
                .map(|e| format!("{},{},{},{}", e.reference, e.r, e.t, e.recovered))
                .collect();
            meta.csv("ref,r,t,recovered", &rows)
        }
        FormatArg::Json => json_doc(&merge(
            base_json(cli, "hp", n),
            json!({
                "refs": refs,
                "rlist": rlist,
                "t_max": t_max,
                "boundary": boundary,
                "entries": entries,
            }),
        )),
    })
}

fn cmd_scan_nonmono(cli: &Cli) -> Result<String, CliError> {
    let HpInputs {
        n,
        circuit,
        refs,
        rlist,
        t_max,
        boundary,
    } = hp_inputs(cli)?;
    let entries = recovery_scan(&circuit, &refs, &rlist, t_max)?;
    let flags = nonmonotonicity_flags(&entries);
    let grt = general_recovery_time(&entries, boundary);
    Ok(match cli.format {
        FormatArg::Csv => {
            let mut meta = base_meta(cli, "scan-nonmono", n);
            meta.push_list("refs", &refs);
            meta.push_list("rlist", &rlist);
            meta.push("tmax", t_max);
            meta.push("boundary", boundary);
            meta.push(
                "general_recovery_time",
                grt.map_or("none".into(), |t| t.to_string()),
            );
            let rows: Vec<String> = flags
                .iter()
                .map(|f| format!("{},{},{}", f.reference, f.r, f.flag))
                .collect();
            meta.csv("ref,r,nonmonotone", &rows)
        }
        FormatArg::Json => {
            let flags: Vec<serde_json::Value> = flags
                .iter()
                .map(|f| json!({ "ref": f.reference, "r": f.r, "nonmonotone": f.flag }))
                .collect();
            json_doc(&merge(
                base_json(cli, "scan-nonmono", n),
                json!({
                    "refs": refs,
                    "rlist": rlist,
                    "t_max": t_max,
                    "boundary": boundary,
                    "general_recovery_time": grt,
                    "flags": flags,
                }),
            ))
        }
    })
}

fn cmd_lyapunov(cli: &Cli) -> Result<String, CliError> {
    if cli.layout == LayoutArg::Double {
        return Err(CliError::Config(
            "lyapunov sweeps run on the single layer".into(),
        ));
    }
    if cli.n.is_empty() {
        return Err(CliError::Config("missing -N <side list>".into()));
    }
    let rule = rule(cli)?;
    let gate = gate(cli)?;
    let points = lyapunov_sweep(rule, &gate, &cli.n, cli.threshold)?;
    let fit_points: Vec<(usize, f64)> = points.iter().map(|p| (p.n_side, p.mean_ts)).collect();
    let fit = lyapunov_fit(&fit_points)?;
    let threshold_desc = cli.threshold.map_or("N^2/2".to_string(), |v| v.to_string());
    Ok(match cli.format {
        FormatArg::Csv => {
            let mut meta = Meta::new("lyapunov");
            meta.push("layout", "single");
            meta.push_list("N", &cli.n);
            meta.push("rule", &cli.rule);
            meta.push("gate", cli.gate.trim());
            meta.push("threshold", &threshold_desc);
            meta.push("lambda", fit.lambda);
            meta.push("lambda_err", fit.lambda_err);
            meta.push("slope", fit.slope);
            meta.push("slope_err", fit.slope_err);
            meta.push("intercept", fit.intercept);
            let rows: Vec<String> = points
                .iter()
                .map(|p| {
                    format!(
                        "{},{},{},{}",
                        p.n_side,
                        lyapunov_abscissa(p.n_side),
                        p.mean_ts,
                        p.sem_ts
                    )
                })
                .collect();
            meta.csv("N,ln_half_N2,ts_mean,ts_err", &rows)
        }
        FormatArg::Json => {
            let points: Vec<serde_json::Value> = points
                .iter()
                .map(|p| {
                    json!({
                        "N": p.n_side,
                        "ln_half_N2": lyapunov_abscissa(p.n_side),
                        "ts_mean": p.mean_ts,
                        "ts_err": p.sem_ts,
                    })
                })
                .collect();
            json_doc(&json!({
                "command": "lyapunov",
                "layout": "single",
                "N": cli.n,
                "rule": cli.rule,
                "gate": cli.gate.trim(),
                "threshold": threshold_desc,
                "lambda": fit.lambda,
                "lambda_err": fit.lambda_err,
                "slope": fit.slope,
                "slope_err": fit.slope_err,
                "intercept": fit.intercept,
                "points": points,
            }))
        }
    })
}

fn cmd_validate(cli: &Cli) -> Result<String, CliError> {
    let n = single_n(cli)?;
    let layout = layout(cli, n)?;
    let rule = rule(cli)?;
    let mut checks: Vec<(&str, bool)> = Vec::new();

    let partition_ok = Partition::build(layout, rule)
        .and_then(|p| p.validate())
        .is_ok();
    checks.push(("partition", partition_ok));
    checks.push((
        "permutation lift symplectic",
        perm_map(layout).is_symplectic(),
    ));
    let circuit = circuit(cli, n)?;
    checks.push(("step map symplectic", circuit.step_map().is_symplectic()));
    let assembled_ok = circuit
        .step_gate_by_gate()
        .map(|m| m == *circuit.step_map())
        .unwrap_or(false);
    checks.push(("assembled interaction matches gate-by-gate", assembled_ok));

    let all_ok = checks.iter().all(|&(_, ok)| ok);
    if !all_ok {
        let failed: Vec<&str> = checks
            .iter()
            .filter_map(|&(name, ok)| (!ok).then_some(name))
            .collect();
        return Err(CliError::Invariant(format!(
            "validation failed: {}",
            failed.join(", ")
        )));
    }
    Ok(match cli.format {
        FormatArg::Csv => {
            let mut meta = base_meta(cli, "validate", n);
            meta.push("valid", true);
            let rows: Vec<String> = checks
                .iter()
                .map(|(name, ok)| format!("{name},{ok}"))
                .collect();
            meta.csv("check,ok", &rows)
        }
        FormatArg::Json => {
            let checks: Vec<serde_json::Value> = checks
                .iter()
                .map(|(name, ok)| json!({ "name": name, "ok": ok }))
                .collect();
            json_doc(&merge(
                base_json(cli, "validate", n),
                json!({ "valid": true, "checks": checks }),
            ))
        }
    })
}
