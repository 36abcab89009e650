//! Command implementations behind the `meshalkin` binary.
//!
//! Each command writes its report to `out`, diagnostics to `err`, and returns
//! the process exit code: 0 on success or a valid family, 1 on a failed
//! self-check, 2 on usage or validation errors.

pub mod document;

use std::fmt::Display;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use num::BigUint;

use crate::exactmath::{to_rational, ExactRational};
use crate::families::{erdos_extremal_family, longest_chain, SubsetMask};
use crate::meshalkin::{
    balanced_extremal_family, block_count, component_family, first_violation, meshalkin_bound,
    meshalkin_bound_value, meshalkin_lym_sum, CompositionFamily, Validity,
};
use crate::oracle::{complement_pairs, max_family_size_with, SearchLimits};
use crate::selfcheck;

pub use document::{read_family, write_family, DocumentError, FamilyDocument};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Exact rational as `a/b`, always with a denominator.
pub fn format_exact(q: &ExactRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn fail(err: &mut dyn Write, message: impl Display) -> u8 {
    let _ = writeln!(err, "error: {message}");
    EXIT_USAGE
}

/// `bound`: the cardinality bound, optionally with its coefficients.
pub fn cmd_bound(
    n: u64,
    p: usize,
    r: u64,
    list: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    if !list {
        return match meshalkin_bound_value(n, p, r) {
            Ok(bound) => {
                let _ = writeln!(out, "bound = {bound}");
                EXIT_OK
            }
            Err(e) => fail(err, e),
        };
    }
    let report = match meshalkin_bound(n, p, r) {
        Ok(report) => report,
        Err(e) => return fail(err, e),
    };
    let _ = writeln!(out, "bound = {}", report.bound);
    let _ = writeln!(out, "blocks = r^(p-1) = {}", report.blocks);
    let _ = writeln!(out, "coefficients used:");
    for (i, (shape, value)) in report.coefficients_used.iter().enumerate() {
        let _ = writeln!(out, "  M_{} = {value}  shape {shape}", i + 1);
    }
    let _ = writeln!(out, "padded zeros = {}", report.padded_zeros);
    EXIT_OK
}

fn chain_text(chain: &[SubsetMask]) -> String {
    chain
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ⊂ ")
}

/// Report on a parsed family. Exit 0 iff the hypothesis holds.
pub fn verify_family(
    family: &CompositionFamily,
    r: u64,
    mode: Validity,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let p = family.parts();
    let n = family.n();
    let _ = writeln!(out, "family: n = {n}, p = {p}, size {}", family.len());
    let constrained = mode.constrained(p);
    for k in 1..=p {
        let component = component_family(family, k).expect("k in range");
        let chain = longest_chain(&component).len();
        let status = if !constrained.contains(&k) {
            "unconstrained"
        } else if chain as u64 <= r {
            "ok"
        } else {
            "too long"
        };
        let _ = writeln!(
            out,
            "M_{k}: {} distinct parts, longest chain {chain} ({status})",
            component.len()
        );
    }

    let violation = match first_violation(family, r, mode) {
        Ok(v) => v,
        Err(e) => return fail(err, e),
    };
    if let Some(v) = violation {
        let _ = writeln!(
            out,
            "INVALID: M_{} contains a {}-set chain",
            v.k,
            v.chain.len()
        );
        let _ = writeln!(out, "  chain: {}", chain_text(&v.chain));
        return EXIT_USAGE;
    }

    let lym = meshalkin_lym_sum(family);
    let (budget, bound) = match (block_count(p, r), meshalkin_bound_value(n as u64, p, r)) {
        (Ok(b), Ok(v)) => (b, v),
        (Err(e), _) | (_, Err(e)) => return fail(err, e),
    };
    let lym_ok = lym <= to_rational(&budget);
    let size_ok = BigUint::from(family.len()) <= bound;
    if !(lym_ok && size_ok) {
        let _ = writeln!(
            out,
            "VIOLATION: lym={} vs {budget}; size {} vs {bound}",
            format_exact(&lym),
            family.len()
        );
        return EXIT_CHECK_FAILED;
    }
    let _ = writeln!(
        out,
        "valid; lym={} ≤ {budget}; size {} ≤ {bound}",
        format_exact(&lym),
        family.len()
    );
    EXIT_OK
}

/// `verify`: parse a family file and check it.
pub fn cmd_verify(
    path: &Path,
    r: u64,
    strict: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        match std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf) {
            Ok(_) => buf,
            Err(e) => return fail(err, format!("reading standard input: {e}")),
        }
    } else {
        match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(err, format!("reading {}: {e}", path.display())),
        }
    };
    let family = match read_family(&text) {
        Ok(f) => f,
        Err(e) => return fail(err, e),
    };
    let mode = if strict {
        Validity::Strict
    } else {
        Validity::Standard
    };
    verify_family(&family, r, mode, out, err)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Balanced,
    Erdos,
}

/// The family a construction produces, or an error message.
pub fn extremal_family(
    n: u32,
    p: usize,
    r: u64,
    construction: Construction,
    err: &mut dyn Write,
) -> Result<CompositionFamily, String> {
    if r < 1 {
        return Err("r must be at least 1".into());
    }
    match construction {
        Construction::Balanced => {
            if r != 1 {
                let _ = writeln!(
                    err,
                    "warning: the balanced family is 1-chain-free; it is valid but not extremal in general for r = {r}"
                );
            }
            balanced_extremal_family(n, p).map_err(|e| e.to_string())
        }
        Construction::Erdos => {
            if p != 2 {
                return Err(format!("the erdos construction needs p = 2, got {p}"));
            }
            let sets = erdos_extremal_family(n, r).map_err(|e| e.to_string())?;
            complement_pairs(sets.ground(), sets.iter()).map_err(|e| e.to_string())
        }
    }
}

/// `extremal`: emit a construction as a family document.
pub fn cmd_extremal(
    n: u32,
    p: usize,
    r: u64,
    construction: Construction,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let family = match extremal_family(n, p, r, construction, err) {
        Ok(f) => f,
        Err(e) => return fail(err, e),
    };
    let text = match write_family(&family) {
        Ok(t) => t,
        Err(e) => return fail(err, e),
    };
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return fail(err, format!("writing {}: {e}", path.display()));
            }
            let _ = writeln!(
                err,
                "wrote {} compositions to {}",
                family.len(),
                path.display()
            );
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    EXIT_OK
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub limits: SearchLimits,
    pub strict: bool,
    pub print_witness: bool,
    pub witness_output: Option<std::path::PathBuf>,
}

/// `search`: run the oracle and print its report.
pub fn cmd_search(
    n: u32,
    p: usize,
    r: u64,
    options: &SearchOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let mode = if options.strict {
        Validity::Strict
    } else {
        Validity::Standard
    };
    let report = match max_family_size_with(n, p, r, &options.limits, mode) {
        Ok(report) => report,
        Err(e) => return fail(err, e),
    };
    let status = if report.exact { "exact" } else { "lower bound" };
    let _ = writeln!(
        out,
        "max = {} ({status}), bound = {}, gap = {}",
        report.max_size, report.bound, report.bound_gap
    );
    let _ = writeln!(
        out,
        "nodes = {}, time = {:.3}s",
        report.nodes_explored,
        report.wall_time.as_secs_f64()
    );
    if let Some(witness) = &report.witness {
        let text = match write_family(witness) {
            Ok(t) => t,
            Err(e) => return fail(err, e),
        };
        if options.print_witness {
            let _ = out.write_all(text.as_bytes());
        }
        if let Some(path) = &options.witness_output {
            if let Err(e) = std::fs::write(path, &text) {
                return fail(err, format!("writing {}: {e}", path.display()));
            }
        }
    }
    EXIT_OK
}

/// `selfcheck`: run the identity suite.
pub fn cmd_selfcheck(out: &mut dyn Write) -> u8 {
    let groups = selfcheck::run();
    let mut all = true;
    for g in &groups {
        let mark = if g.passed { "pass" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{mark}  {:<14} {} checks  {}",
            g.name, g.checks, g.detail
        );
        all &= g.passed;
    }
    if all {
        let _ = writeln!(out, "all {} groups passed", groups.len());
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// Seconds from the command line as a duration.
pub fn seconds(value: f64) -> Option<Duration> {
    (value.is_finite() && value >= 0.0).then(|| Duration::from_secs_f64(value))
}
