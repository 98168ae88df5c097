//! The four subcommands. Each returns its rendered output and exit code;
//! nothing here touches the process directly.

use std::fmt::Write as _;

use nondegen_core::reduction::frobenius_condition_matrix;
use nondegen_core::{
    enumerate_cm_types, fermat_nonunit_solutions, make_group, mt_consistency, mt_lattice_test,
    ns2_test, p_lattice_test, rs2_test, CmType, Error, FinAbGroup, ReductionStatus,
};
use rayon::prelude::*;

use crate::job::{CmSource, CommandKind, JobSpec, OutputFormat};
use crate::report::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_OVERFLOW: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

/// Largest group order `enumerate` accepts; there are `2^(order/2)` CM-types.
pub const ENUMERATE_LIMIT: usize = 24;

#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn fail(code: i32, msg: impl Into<String>) -> Outcome {
        Outcome {
            stdout: String::new(),
            stderr: msg.into(),
            code,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ArithmeticOverflow => EXIT_OVERFLOW,
        Error::Inconsistent(_) => EXIT_INCONSISTENT,
        _ => EXIT_INVALID,
    }
}

fn from_error(err: Error) -> Outcome {
    Outcome::fail(exit_code(&err), format!("error: {err}\n"))
}

pub fn run(job: &JobSpec) -> Outcome {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(job.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => return Outcome::fail(EXIT_INVALID, format!("error: thread pool: {e}\n")),
    };
    pool.install(|| {
        let result = match job.command {
            CommandKind::Analyze => analyze(job),
            CommandKind::Reduce => reduce(job),
            CommandKind::Scan => scan(job),
            CommandKind::Enumerate => enumerate(job),
        };
        result.unwrap_or_else(from_error)
    })
}

fn build_cm_type(job: &JobSpec) -> Result<(CmType, Vec<u64>), Error> {
    let source = job
        .cm_type
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("--phi is required".into()))?;
    let cm = source.build(job.modulus, &job.kernel)?;
    let notes = match source {
        CmSource::Fermat(a) => fermat_nonunit_solutions(job.modulus, *a)?,
        CmSource::List(_) => Vec::new(),
    };
    Ok((cm, notes))
}

fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn generic_block(cm: &CmType) -> Result<(GenericInfo, Option<String>), Error> {
    let chars = ns2_test(cm)?;
    let lattice = mt_lattice_test(cm)?;
    let info = GenericInfo::new(cm.group(), &chars, &lattice);
    let disagreement = (chars.nondegenerate != lattice.nondegenerate
        || chars.kernel_rank != lattice.kernel_rank)
        .then(|| {
            format!(
                "error: generic oracles disagree\ncharacter test: {}\nlattice test: {}\n",
                serde_json::to_string(&info.character_test).unwrap_or_default(),
                serde_json::to_string(&info.lattice_test).unwrap_or_default()
            )
        });
    Ok((info, disagreement))
}

fn write_set(out: &mut String, xs: &[u64]) {
    out.push('{');
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{x}");
    }
    out.push('}');
}

fn witness_text(w: &Option<WitnessInfo>) -> String {
    match w {
        None => "none".into(),
        Some(WitnessInfo::Character {
            exponents, order, ..
        }) => format!("odd character of order {order}, exponents {exponents:?}"),
        Some(WitnessInfo::LatticeVector { vector, .. }) => match vector {
            IntList::Small(v) => format!("kernel vector {v:?}"),
            IntList::Big(v) => format!("kernel vector {v:?}"),
        },
    }
}

fn human_header(out: &mut String, job: &JobSpec, group: &FinAbGroup, cm: Option<&CmTypeInfo>) {
    let _ = write!(out, "modulus {}, kernel ", job.modulus);
    write_set(out, &job.kernel);
    let _ = writeln!(
        out,
        ": Galois group of order {}, complex conjugation {}",
        group.order(),
        group.conj()
    );
    if let Some(cm) = cm {
        out.push_str("CM-type ");
        write_set(out, &cm.phi);
        if cm.primitive {
            out.push_str(" (primitive)\n");
        } else {
            out.push_str(" (imprimitive, stabilizer ");
            write_set(out, &cm.stabilizer);
            out.push_str("; hypothesis_violation: not simple)\n");
        }
        if !cm.nonunit_solutions.is_empty() {
            out.push_str("note: non-unit solutions of the Fermat equation were excluded: ");
            write_set(out, &cm.nonunit_solutions);
            out.push('\n');
        }
    }
}

fn human_generic(out: &mut String, g: &GenericInfo) {
    let _ = writeln!(out, "generic fiber: {}", g.status);
    let _ = writeln!(
        out,
        "  character test: {} odd characters with vanishing sum; witness: {}",
        g.character_test.vanishing_count,
        witness_text(&g.character_test.witness)
    );
    let _ = writeln!(
        out,
        "  lattice test:   kernel rank {} (relations {}), dim_L = {}, dim_MT = {}; witness: {}",
        g.lattice_test.kernel_rank,
        g.relations_rank,
        g.dim_l,
        g.dim_mt,
        witness_text(&g.lattice_test.witness)
    );
}

fn analyze(job: &JobSpec) -> Result<Outcome, Error> {
    let (cm, notes) = build_cm_type(job)?;
    let (generic, disagreement) = generic_block(&cm)?;
    if let Some(msg) = disagreement {
        return Ok(Outcome::fail(EXIT_INCONSISTENT, msg));
    }
    let report = Report {
        tool: TOOL,
        version: VERSION,
        job: JobEcho::new(job),
        group: GroupInfo::new(cm.group()),
        cm_type: Some(CmTypeInfo::new(&cm, notes)),
        generic: Some(generic),
        reductions: None,
        scan: None,
        enumeration: None,
    };
    let stdout = match job.format {
        OutputFormat::Json => to_json(&report),
        _ => {
            let mut out = String::new();
            human_header(&mut out, job, cm.group(), report.cm_type.as_ref());
            human_generic(&mut out, report.generic.as_ref().expect("set above"));
            out
        }
    };
    Ok(Outcome {
        stdout,
        stderr: String::new(),
        code: EXIT_OK,
    })
}

/// Per-prime work shared by `reduce` and `scan`.
fn reduce_one(cm: &CmType, p: u64) -> Result<ReductionInfo, Error> {
    let chars = rs2_test(cm, p)?;
    let lattice = p_lattice_test(cm, p)?;
    if chars.status != lattice.status {
        return Err(Error::Inconsistent(format!(
            "p = {p}: character test says {}, lattice test says {}",
            chars.status.as_str(),
            lattice.status.as_str()
        )));
    }
    let consistency = mt_consistency(cm, p)?;
    if !consistency.pass() {
        return Err(Error::Inconsistent(format!(
            "p = {p}: consistency checks failed: {:?}",
            ConsistencyInfo::new(&consistency)
        )));
    }
    let g0_elements = if lattice.status == ReductionStatus::VacuouslyNondegenerate {
        Vec::new()
    } else {
        frobenius_condition_matrix(&chars.slopes, &chars.g1)?
            .0
            .elements()
            .to_vec()
    };
    Ok(ReductionInfo::new(
        cm.group().modulus(),
        &chars,
        &lattice,
        &consistency,
        &g0_elements,
    ))
}

fn reduce(job: &JobSpec) -> Result<Outcome, Error> {
    let (cm, notes) = build_cm_type(job)?;
    let primes = job.prime_list();
    if primes.is_empty() {
        return Err(Error::InvalidInput(
            "reduce needs at least one prime (-p or --primes)".into(),
        ));
    }
    let (generic, disagreement) = generic_block(&cm)?;
    if let Some(msg) = disagreement {
        return Ok(Outcome::fail(EXIT_INCONSISTENT, msg));
    }
    let results: Vec<(u64, Result<ReductionInfo, Error>)> = primes
        .par_iter()
        .map(|&p| (p, reduce_one(&cm, p)))
        .collect();

    let mut worst = EXIT_OK;
    let mut stderr = String::new();
    let mut entries = Vec::with_capacity(results.len());
    for (p, r) in results {
        match r {
            Ok(info) => entries.push(ReductionEntry {
                p,
                error: None,
                result: Some(info),
            }),
            Err(e) => {
                let code = exit_code(&e);
                if code != EXIT_INVALID {
                    worst = worst.max(code);
                }
                let _ = writeln!(stderr, "error: p = {p}: {e}");
                entries.push(ReductionEntry {
                    p,
                    error: Some(e.to_string()),
                    result: None,
                });
            }
        }
    }
    let code = if worst != EXIT_OK {
        worst
    } else if entries.iter().any(|e| e.result.is_some()) {
        EXIT_OK
    } else {
        EXIT_INVALID
    };

    let report = Report {
        tool: TOOL,
        version: VERSION,
        job: JobEcho::new(job),
        group: GroupInfo::new(cm.group()),
        cm_type: Some(CmTypeInfo::new(&cm, notes)),
        generic: Some(generic),
        reductions: Some(entries),
        scan: None,
        enumeration: None,
    };
    let stdout = match job.format {
        OutputFormat::Json => to_json(&report),
        _ => human_reduce(job, &cm, &report),
    };
    Ok(Outcome {
        stdout,
        stderr,
        code,
    })
}

fn human_reduce(job: &JobSpec, cm: &CmType, report: &Report) -> String {
    let mut out = String::new();
    human_header(&mut out, job, cm.group(), report.cm_type.as_ref());
    human_generic(
        &mut out,
        report.generic.as_ref().expect("reduce sets generic"),
    );
    for entry in report.reductions.iter().flatten() {
        let Some(r) = &entry.result else {
            let _ = writeln!(
                out,
                "p = {}: error: {}",
                entry.p,
                entry.error.as_deref().unwrap_or("")
            );
            continue;
        };
        let _ = writeln!(
            out,
            "p = {} (p mod m = {}): {}{}",
            entry.p,
            r.p_mod_m,
            r.status,
            if r.outside_rs2_hypotheses {
                " [outside_rs2_hypotheses]"
            } else {
                ""
            }
        );
        let _ = writeln!(
            out,
            "  f = {}, |G1| = {}, [E0:Q] = {}",
            r.f, r.g1_order, r.e0_degree
        );
        out.push_str("  slopes:");
        for s in &r.slopes {
            let _ = write!(
                out,
                " {}:{}/{}",
                s.element, s.numerator, r.slope_denominator
            );
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "  character test: {} ({} vanishing); lattice test: {} (kernel rank {})",
            r.character_test.status,
            r.character_test.vanishing_count,
            r.lattice_test.status,
            r.lattice_test
                .kernel_rank
                .map_or_else(|| "-".to_string(), |k| k.to_string())
        );
        let _ = writeln!(
            out,
            "  consistency: {}",
            if r.consistency.pass { "pass" } else { "FAIL" }
        );
    }
    out
}

fn scan(job: &JobSpec) -> Result<Outcome, Error> {
    let (cm, notes) = build_cm_type(job)?;
    let primes: Vec<u64> = job
        .prime_list()
        .into_iter()
        .filter(|p| !job.modulus.is_multiple_of(*p))
        .collect();
    if primes.is_empty() {
        return Err(Error::InvalidInput(
            "prime range contains no unramified primes".into(),
        ));
    }
    let results: Vec<Result<ReductionInfo, Error>> =
        primes.par_iter().map(|&p| reduce_one(&cm, p)).collect();
    let mut rows = Vec::with_capacity(primes.len());
    let mut counts = StatusCounts::default();
    for (&p, r) in primes.iter().zip(results) {
        let r = r?;
        counts.add(r.status);
        rows.push(ScanRow {
            p,
            p_mod_m: r.p_mod_m,
            f: r.f,
            g1_order: r.g1_order,
            e0_degree: r.e0_degree,
            status: r.status,
        });
    }
    let summary = format!(
        "summary: Nondegenerate={} Degenerate={} VacuouslyNondegenerate={}\n",
        counts.nondegenerate, counts.degenerate, counts.vacuously_nondegenerate
    );
    let stdout = match job.format {
        OutputFormat::Json => {
            let report = Report {
                tool: TOOL,
                version: VERSION,
                job: JobEcho::new(job),
                group: GroupInfo::new(cm.group()),
                cm_type: Some(CmTypeInfo::new(&cm, notes)),
                generic: None,
                reductions: None,
                scan: Some(ScanInfo { rows, counts }),
                enumeration: None,
            };
            to_json(&report)
        }
        _ => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row)
                    .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
            String::from_utf8(bytes).expect("csv output is UTF-8")
        }
    };
    Ok(Outcome {
        stdout,
        stderr: summary,
        code: EXIT_OK,
    })
}

fn enumerate(job: &JobSpec) -> Result<Outcome, Error> {
    let group = make_group(job.modulus, &job.kernel)?;
    if group.order() > ENUMERATE_LIMIT {
        return Err(Error::InvalidInput(format!(
            "Galois group has order {} > {ENUMERATE_LIMIT}; enumeration would visit 2^{} CM-types. \
             Use analyze on individual types instead.",
            group.order(),
            group.order() / 2
        )));
    }
    let mut all = enumerate_cm_types(&group);
    let mut class_sizes = Vec::new();
    if job.up_to_translation {
        let mut reps: Vec<(Vec<u64>, usize)> = Vec::new();
        for cm in &all {
            let rep = cm.translation_class_representative();
            match reps.iter_mut().find(|(phi, _)| phi.as_slice() == rep.phi()) {
                Some((_, n)) => *n += 1,
                None => reps.push((rep.phi().to_vec(), 1)),
            }
        }
        reps.sort();
        all = reps
            .iter()
            .map(|(phi, _)| nondegen_core::validate_cm_type(&group, phi))
            .collect::<Result<_, _>>()?;
        class_sizes = reps.into_iter().map(|(_, n)| n).collect();
    }

    let verdicts: Vec<Result<EnumeratedType, Error>> = all
        .par_iter()
        .map(|cm| {
            let chars = ns2_test(cm)?;
            let lattice = mt_lattice_test(cm)?;
            if chars.nondegenerate != lattice.nondegenerate {
                return Err(Error::Inconsistent(format!(
                    "oracles disagree on {:?}",
                    cm.phi()
                )));
            }
            Ok(EnumeratedType {
                phi: cm.phi().to_vec(),
                primitive: lattice.primitive,
                nondegenerate: lattice.nondegenerate,
                vanishing_count: chars.vanishing_count,
                class_size: None,
            })
        })
        .collect();
    let mut types = verdicts.into_iter().collect::<Result<Vec<_>, _>>()?;
    for (t, n) in types.iter_mut().zip(&class_sizes) {
        t.class_size = Some(*n);
    }
    let primitive = types.iter().filter(|t| t.primitive).count();
    let nondegenerate = types.iter().filter(|t| t.nondegenerate).count();
    let info = EnumerationInfo {
        up_to_translation: job.up_to_translation,
        total: types.len(),
        primitive,
        imprimitive: types.len() - primitive,
        nondegenerate,
        degenerate: types.len() - nondegenerate,
        types,
    };
    let stdout = match job.format {
        OutputFormat::Json => to_json(&Report {
            tool: TOOL,
            version: VERSION,
            job: JobEcho::new(job),
            group: GroupInfo::new(&group),
            cm_type: None,
            generic: None,
            reductions: None,
            scan: None,
            enumeration: Some(info),
        }),
        _ => {
            let mut out = String::new();
            human_header(&mut out, job, &group, None);
            let _ = writeln!(
                out,
                "{} CM-type{}{}: {} primitive, {} imprimitive, {} nondegenerate, {} degenerate",
                info.total,
                if info.total == 1 { "" } else { "s" },
                if info.up_to_translation {
                    " up to translation"
                } else {
                    ""
                },
                info.primitive,
                info.imprimitive,
                info.nondegenerate,
                info.degenerate
            );
            for t in &info.types {
                out.push_str("  ");
                write_set(&mut out, &t.phi);
                let _ = write!(
                    out,
                    " {} {}",
                    if t.primitive {
                        "primitive"
                    } else {
                        "imprimitive"
                    },
                    generic_status(t.nondegenerate)
                );
                if let Some(n) = t.class_size {
                    let _ = write!(out, " (class of {n})");
                }
                out.push('\n');
            }
            out
        }
    };
    Ok(Outcome {
        stdout,
        stderr: String::new(),
        code: EXIT_OK,
    })
}
