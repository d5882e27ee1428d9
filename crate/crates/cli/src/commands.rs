//! Execution of validated jobs.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use skc_core::characters::KroneckerCharacter;
use skc_core::lfun::{lvalue_numeric, required_terms, script_l_terms, script_l_valuation};
use skc_core::qseries::{newforms, Newform};
use skc_core::records::{parse_record, siegel_csv, LValueRecord, Record};
use skc_core::siegel::SiegelForm;
use skc_core::siegel2::{eigenforms, hecke_eigenvalue, hecke_t2, scan_congruences, space, FormKind};
use skc_core::sklift::{maass_relation_check, sk_lift};
use skc_core::QuadElement;

use crate::cache::{Cache, CacheKey, Lookup};
use crate::error::{CliError, CliResult};
use crate::manifest::{Format, Job, JobManifest};

/// Largest input file read.
pub const MAX_INPUT_BYTES: u64 = 64 << 20;
/// Exponent cap for congruence scans; reported as ">= cap" when reached.
const CONGRUENCE_CAP: i64 = 50;

pub struct RunOutput {
    pub text: String,
    /// One entry per cache access, as (entry file name, outcome).
    pub cache_log: Vec<(String, Lookup)>,
}

struct Ctx<'a> {
    cache: Option<&'a Cache>,
    log: Vec<(String, Lookup)>,
}

impl Ctx<'_> {
    fn cached<T>(
        &mut self,
        key: CacheKey,
        compute: impl FnOnce() -> CliResult<String>,
        decode: impl Fn(&str) -> CliResult<T>,
    ) -> CliResult<T> {
        match self.cache {
            Some(c) => {
                let (v, lookup) = c.get_or_compute(&key, compute, decode)?;
                self.log.push((format!("{}.json", key.digest()), lookup));
                Ok(v)
            }
            None => decode(&compute()?),
        }
    }
}

fn record_value(r: Record) -> Value {
    serde_json::from_str(&r.to_json()).expect("records are JSON")
}

fn pretty(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn siegel_from_value(v: &Value) -> CliResult<SiegelForm> {
    match parse_record(&v.to_string())? {
        Record::Siegel(f) => Ok(f),
        _ => Err(CliError::Input("expected a siegel record".into())),
    }
}

/// Siegel records, one JSON object per non-empty line.
pub fn parse_siegel_lines(text: &str) -> CliResult<Vec<SiegelForm>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| match parse_record(l) {
            Ok(Record::Siegel(f)) => Ok(f),
            Ok(_) => Err(CliError::Input(format!("record {}: expected a siegel record", i + 1))),
            Err(e) => Err(CliError::Input(format!("record {}: {e}", i + 1))),
        })
        .collect()
}

fn siegel_lines(forms: &[SiegelForm]) -> String {
    forms.iter().map(|f| Record::Siegel(f.clone()).to_json() + "\n").collect()
}

/// Coefficient tables, one per form, separated by blank lines.
fn csv_tables<'a>(forms: impl IntoIterator<Item = &'a SiegelForm>) -> String {
    forms.into_iter().map(siegel_csv).collect::<Vec<_>>().join("\n")
}

fn hecke_field(w: u32) -> CliResult<String> {
    let disc = newforms(w, 1)?.first().map_or(0, Newform::disc);
    Ok(if disc == 0 { "Q".into() } else { format!("Q(sqrt({disc}))") })
}

fn lifts(ctx: &mut Ctx, weight: u32, prec: u64) -> CliResult<Vec<SiegelForm>> {
    let w = 2 * weight - 2;
    let key = CacheKey::new("sk-lift", weight, prec, &hecke_field(w)?);
    let compute = || -> CliResult<String> {
        let forms = newforms(w, 10)?.iter().map(|f| sk_lift(f, prec)).collect::<Result<Vec<_>, _>>()?;
        Ok(siegel_lines(&forms))
    };
    ctx.cached(key, compute, parse_siegel_lines)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EigenEntry {
    kind: FormKind,
    lambda2: String,
    maass_relation: bool,
    form: Value,
}

struct Eigen {
    kind: FormKind,
    lambda2: QuadElement,
    form: SiegelForm,
}

fn decode_eigen(text: &str) -> CliResult<(Vec<EigenEntry>, Vec<Eigen>)> {
    let entries: Vec<EigenEntry> = serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
    let forms = entries
        .iter()
        .map(|e| {
            let lambda2 = e.lambda2.parse().map_err(|e: skc_core::Error| CliError::Input(e.to_string()))?;
            Ok(Eigen { kind: e.kind, lambda2, form: siegel_from_value(&e.form)? })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok((entries, forms))
}

fn eigen(ctx: &mut Ctx, weight: u32, prec: u64) -> CliResult<(Vec<EigenEntry>, Vec<Eigen>)> {
    let key = CacheKey::new("eigenforms", weight, prec, "hecke");
    let compute = || -> CliResult<String> {
        let entries: Vec<EigenEntry> = eigenforms(&space(weight, prec)?)?
            .into_iter()
            .map(|e| EigenEntry {
                kind: e.kind,
                lambda2: e.lambda2.to_string(),
                maass_relation: e.relation.holds,
                form: record_value(Record::Siegel(e.form)),
            })
            .collect();
        Ok(serde_json::to_string(&entries).expect("entries serialize"))
    };
    ctx.cached(key, compute, decode_eigen)
}

fn basis(ctx: &mut Ctx, weight: u32, prec: u64) -> CliResult<Value> {
    let key = CacheKey::new("basis", weight, prec, "Q");
    let compute = || -> CliResult<String> {
        let s = space(weight, prec)?;
        let t2: Vec<Vec<String>> = s.t2_matrix().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        let forms: Vec<Value> = s.basis().iter().map(|f| record_value(Record::Siegel(f.clone()))).collect();
        let v = json!({
            "weight": weight,
            "prec": prec,
            "monomials": s.monomials(),
            "dim": s.dim(),
            "phi_rank": s.phi_rank(),
            "cusp_dim": s.cusp_dim(),
            "maass_dim": s.maass_dim(),
            "non_maass_dim": s.non_maass_dim(),
            "kinds": s.kinds(),
            "t2_cusp": t2,
            "forms": forms,
        });
        Ok(v.to_string())
    };
    ctx.cached(key, compute, |t| {
        let v: Value = serde_json::from_str(t).map_err(|e| CliError::Input(e.to_string()))?;
        for f in v["forms"].as_array().ok_or_else(|| CliError::Input("basis without forms".into()))? {
            siegel_from_value(f)?;
        }
        Ok(v)
    })
}

fn read_input(manifest: &JobManifest) -> CliResult<String> {
    use std::io::Read;
    let path = manifest.input.as_ref().ok_or_else(|| CliError::Usage("missing --input".into()))?;
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut text = String::new();
    file.take(MAX_INPUT_BYTES + 1).read_to_string(&mut text).map_err(|e| CliError::io(path, e))?;
    if text.len() as u64 > MAX_INPUT_BYTES {
        return Err(CliError::Input(format!("input larger than {MAX_INPUT_BYTES} bytes")));
    }
    Ok(text)
}

fn character(d: i64) -> CliResult<KroneckerCharacter> {
    Ok(if d == 1 { KroneckerCharacter::trivial() } else { KroneckerCharacter::new(d)? })
}

fn newform(w: u32, terms: usize, index: usize) -> CliResult<Newform> {
    let mut all = newforms(w, terms)?;
    let n = all.len();
    if index >= n {
        return Err(CliError::Usage(format!("--index {index}: weight {w} has {n} newforms")));
    }
    Ok(all.swap_remove(index))
}

fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    skc_core::arith::primes_up_to(hi).into_iter().filter(|&p| p > lo).collect()
}

/// Runs a manifest. Identical manifests give byte-identical text, cached or not.
pub fn execute(manifest: &JobManifest, cache: Option<&Cache>) -> CliResult<RunOutput> {
    let job = manifest.job()?;
    let format = manifest.format();
    let table_ok = matches!(job, Job::Lift { .. } | Job::Basis { .. } | Job::Hecke | Job::Eigen { .. });
    if format == Format::Csv && !table_ok {
        return Err(CliError::Usage("--format csv applies to lift, basis, hecke and eigen".into()));
    }
    let mut ctx = Ctx { cache, log: Vec::new() };
    let text = match job {
        Job::Lift { weight, prec } => {
            let forms = lifts(&mut ctx, weight, prec)?;
            match format {
                Format::Json => siegel_lines(&forms),
                Format::Csv => csv_tables(&forms),
            }
        }
        Job::MaassCheck { bound } => {
            let forms = parse_siegel_lines(&read_input(manifest)?)?;
            let reports: Vec<_> = forms.iter().map(|f| maass_relation_check(f, bound.unwrap_or(f.prec()))).collect();
            pretty(&reports)
        }
        Job::Basis { weight, prec } => {
            let v = basis(&mut ctx, weight, prec)?;
            match format {
                Format::Json => pretty(&v),
                Format::Csv => {
                    let forms = v["forms"].as_array().into_iter().flatten().map(siegel_from_value);
                    csv_tables(&forms.collect::<CliResult<Vec<_>>>()?)
                }
            }
        }
        Job::Hecke => {
            let forms = parse_siegel_lines(&read_input(manifest)?)?;
            let mut images = Vec::new();
            let mut reports = Vec::new();
            for f in &forms {
                let image = hecke_t2(f)?;
                let lambda = hecke_eigenvalue(f, 2).ok().map(|l| l.to_string());
                reports.push(json!({ "lambda2": lambda, "image": record_value(Record::Siegel(image.clone())) }));
                images.push(image);
            }
            match format {
                Format::Json => pretty(&reports),
                Format::Csv => csv_tables(&images),
            }
        }
        Job::Eigen { weight, prec } => {
            let (entries, forms) = eigen(&mut ctx, weight, prec)?;
            match format {
                Format::Json => pretty(&entries),
                Format::Csv => csv_tables(forms.iter().map(|e| &e.form)),
            }
        }
        Job::Congruence { weight, prec, min_prime, max_prime, bound } => {
            let (_, forms) = eigen(&mut ctx, weight, prec)?;
            let mut pairs = Vec::new();
            let mut found = Vec::new();
            for (i, f) in forms.iter().enumerate().filter(|(_, e)| e.kind == FormKind::Maass) {
                for (j, g) in forms.iter().enumerate().filter(|(_, e)| e.kind == FormKind::NonMaass) {
                    let scan = scan_congruences(&f.form, &g.form, min_prime, max_prime, bound, CONGRUENCE_CAP)?;
                    for h in &scan.hits {
                        found.push(json!({
                            "lift": i,
                            "non_lift": j,
                            "prime": h.fourier.ideal.p,
                            "ideal": h.fourier.ideal.to_string(),
                            "M": h.fourier.exponent.to_string(),
                            "eigenvalue_M": h.eigenvalue.exponent.to_string(),
                            "qualifier": h.fourier.qualifier,
                        }));
                    }
                    pairs.push(json!({
                        "lift": i,
                        "non_lift": j,
                        "lambda2": [f.lambda2.to_string(), g.lambda2.to_string()],
                        "scan": scan,
                    }));
                }
            }
            pretty(&json!({ "weight": weight, "prec": prec, "bound": bound, "found": found, "pairs": pairs }))
        }
        Job::Lvalue { weight, s, chi, bits, index } => {
            let chi = character(chi)?;
            let f = newform(weight, required_terms(weight, s, &chi, bits), index)?;
            let report = lvalue_numeric(&f, s, &chi, bits)?;
            Record::LValue(LValueRecord::from(&report)).to_json() + "\n"
        }
        Job::ScriptL { weight, disc, chi, min_prime, max_prime, bits, index } => {
            let chi = character(chi)?;
            let f = newform(2 * weight - 2, script_l_terms(weight, disc, &chi, bits)?, index)?;
            let report = script_l_valuation(weight, &f, disc, &chi, &primes_between(min_prime, max_prime), bits)?;
            pretty(&report)
        }
    };
    Ok(RunOutput { text, cache_log: ctx.log })
}
