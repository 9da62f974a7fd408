use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use super::CmdOutput;
use crate::combinators::EpochStats;
use crate::dist::{ratio, ratio_string, ratio_to_f64, Dist};
use crate::error::Result;
use crate::reductions::{
    arbitrary_to_uniform_bound, arbitrary_to_uniform_stats, biased_bound, biased_to_uniform_stats,
    uniform_to_rational_stats, uniform_to_uniform_stats,
};

/// Column order of sweep CSV output.
pub const CSV_HEADER: &str = "k,c,p,p_succ,latency,m,ratio,efficiency_bits,loss_k,bound,bound_gap,error";

/// A family with every parameter fixed except the block length.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepFamily {
    UniformUniform { d: usize, c: usize },
    UniformRational { d: usize, numerators: Vec<u64> },
    ArbitraryUniform { source: Dist, c: usize },
    BiasedUniform { r: u64 },
}

/// Statistics of one block length. Rationals are `num/den` strings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub k: usize,
    pub c: Option<String>,
    pub p: Option<String>,
    pub p_succ: Option<String>,
    pub latency: Option<String>,
    pub m: Option<usize>,
    /// Output symbols per input symbol.
    pub ratio: Option<f64>,
    pub efficiency_bits: Option<f64>,
    /// `(1 − efficiency_bits) · k`.
    pub loss_k: Option<f64>,
    /// Best possible output symbols per input symbol for the family.
    pub bound: Option<f64>,
    /// `(bound − ratio) · k`, or `· k / log₂ k` for arbitrary sources.
    pub bound_gap: Option<f64>,
    pub error: Option<String>,
}

impl SweepFamily {
    fn stats(&self, k: usize) -> Result<EpochStats> {
        match self {
            Self::UniformUniform { d, c } => uniform_to_uniform_stats(*d, *c, k),
            Self::UniformRational { d, numerators } => uniform_to_rational_stats(*d, numerators, k),
            Self::ArbitraryUniform { source, c } => arbitrary_to_uniform_stats(source, *c, k),
            Self::BiasedUniform { r } => biased_to_uniform_stats(*r, k),
        }
    }

    fn bound(&self) -> Result<f64> {
        Ok(match self {
            Self::UniformUniform { d, c } => (*d as f64).log2() / (*c as f64).log2(),
            Self::UniformRational { d, numerators } => {
                let nu = Dist::new(numerators.iter().map(|&a| ratio(a, *d as u64)).collect())?;
                (*d as f64).log2() / nu.entropy()
            }
            Self::ArbitraryUniform { source, c } => arbitrary_to_uniform_bound(source, *c),
            Self::BiasedUniform { r } => biased_bound(*r),
        })
    }

    fn gap_scale(&self, k: usize) -> Option<f64> {
        match self {
            Self::ArbitraryUniform { .. } => (k >= 2).then(|| k as f64 / (k as f64).log2()),
            _ => Some(k as f64),
        }
    }

    pub fn row(&self, k: usize) -> SweepRow {
        let empty = SweepRow {
            k,
            c: None,
            p: None,
            p_succ: None,
            latency: None,
            m: None,
            ratio: None,
            efficiency_bits: None,
            loss_k: None,
            bound: None,
            bound_gap: None,
            error: None,
        };
        match self.stats(k).and_then(|st| Ok((st, self.bound()?))) {
            Ok((st, bound)) => {
                let r = ratio_to_f64(&st.ratio());
                SweepRow {
                    c: Some(ratio_string(&st.consumption)),
                    p: Some(ratio_string(&st.production)),
                    p_succ: Some(ratio_string(&st.success)),
                    latency: st.latency.as_ref().map(ratio_string),
                    m: Some(st.max_consumption),
                    ratio: Some(r),
                    efficiency_bits: Some(st.efficiency_bits),
                    loss_k: Some((1.0 - st.efficiency_bits) * k as f64),
                    bound: Some(bound),
                    bound_gap: self.gap_scale(k).map(|s| (bound - r) * s),
                    ..empty
                }
            }
            Err(e) => SweepRow {
                error: Some(e.to_string()),
                ..empty
            },
        }
    }
}

/// One row per `k` in `k_min..=k_max`, computed in parallel, in `k` order.
pub fn sweep_rows(family: &SweepFamily, k_min: usize, k_max: usize) -> Vec<SweepRow> {
    (k_min..=k_max).into_par_iter().map(|k| family.row(k)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub(super) enum FamilyName {
    UniformUniform,
    UniformRational,
    ArbitraryUniform,
    BiasedUniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(super) enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub(super) struct SweepArgs {
    family: FamilyName,
    /// Input alphabet size.
    #[arg(long)]
    d: Option<usize>,
    /// Output alphabet size.
    #[arg(long)]
    c: Option<usize>,
    /// Coin parameter: heads has probability 1/r.
    #[arg(long)]
    r: Option<u64>,
    /// Target numerators over d, comma-separated.
    #[arg(long, value_delimiter = ',')]
    numerators: Vec<u64>,
    /// Source probabilities as fractions, comma-separated.
    #[arg(long, value_delimiter = ',')]
    source: Vec<String>,
    #[arg(long, default_value_t = 1)]
    k_min: usize,
    #[arg(long)]
    k_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn need<T>(value: Option<T>, flag: &str) -> std::result::Result<T, String> {
    value.ok_or_else(|| format!("this family needs --{flag}"))
}

pub(super) fn sweep(args: SweepArgs, out: &mut CmdOutput) -> std::result::Result<(), String> {
    let family = match args.family {
        FamilyName::UniformUniform => SweepFamily::UniformUniform {
            d: need(args.d, "d")?,
            c: need(args.c, "c")?,
        },
        FamilyName::UniformRational => {
            if args.numerators.is_empty() {
                return Err("this family needs --numerators".into());
            }
            SweepFamily::UniformRational {
                d: need(args.d, "d")?,
                numerators: args.numerators.clone(),
            }
        }
        FamilyName::ArbitraryUniform => {
            if args.source.is_empty() {
                return Err("this family needs --source".into());
            }
            let probs = args
                .source
                .iter()
                .map(|s| super::parse_exact(s))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            SweepFamily::ArbitraryUniform {
                source: Dist::new(probs).map_err(|e| e.to_string())?,
                c: need(args.c, "c")?,
            }
        }
        FamilyName::BiasedUniform => SweepFamily::BiasedUniform { r: need(args.r, "r")? },
    };
    let rows = sweep_rows(&family, args.k_min, args.k_max);
    match args.format {
        Format::Json => {
            out.stdout
                .push_str(&serde_json::to_string_pretty(&rows_json(&rows)).expect("json"));
            out.stdout.push('\n');
        }
        Format::Csv => out.stdout.push_str(&rows_csv(&rows)),
    }
    Ok(())
}

fn fixed(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.9}")).unwrap_or_default()
}

/// CSV text with [`CSV_HEADER`] and LF line endings.
pub(super) fn rows_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(',')).expect("in-memory write");
    for r in rows {
        let opt = |s: &Option<String>| s.clone().unwrap_or_default();
        w.write_record([
            r.k.to_string(),
            opt(&r.c),
            opt(&r.p),
            opt(&r.p_succ),
            opt(&r.latency),
            r.m.map(|m| m.to_string()).unwrap_or_default(),
            fixed(r.ratio),
            fixed(r.efficiency_bits),
            fixed(r.loss_k),
            fixed(r.bound),
            fixed(r.bound_gap),
            opt(&r.error),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn rows_json(rows: &[SweepRow]) -> serde_json::Value {
    let num = |x: Option<f64>| x.map(super::round9).unwrap_or(serde_json::Value::Null);
    rows.iter()
        .map(|r| {
            serde_json::json!({
                "k": r.k,
                "c": r.c,
                "p": r.p,
                "p_succ": r.p_succ,
                "latency": r.latency,
                "m": r.m,
                "ratio": num(r.ratio),
                "efficiency_bits": num(r.efficiency_bits),
                "loss_k": num(r.loss_k),
                "bound": num(r.bound),
                "bound_gap": num(r.bound_gap),
                "error": r.error,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_stay_in_row() {
        let rows = sweep_rows(&SweepFamily::BiasedUniform { r: 5 }, 2, 3);
        assert!(rows[0].error.is_some());
        assert!(rows[1].error.is_none());
        let text = rows_csv(&rows);
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn empty_range_is_header_only() {
        let rows = sweep_rows(&SweepFamily::UniformUniform { d: 10, c: 2 }, 5, 4);
        assert_eq!(rows_csv(&rows), format!("{CSV_HEADER}\n"));
    }
}
