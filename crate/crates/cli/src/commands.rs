use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use annote_kb::inference::{explicate as explicate_object, InferenceError};
use annote_kb::model::{AvPair, ExplicitnessState, Id, Term, Tier};
use annote_kb::query::{self, QueryError, SearchMode};
use annote_kb::store::{load_facts_into, Diagnostic};
use annote_kb::{load_facts, save_facts, KnowledgeBase};
use anyhow::{anyhow, Context, Result};
use serde_json::{json, Value as Json};

use crate::{CliConfig, OutputFormat};

const EXIT_OK: u8 = 0;
const EXIT_PARTIAL: u8 = 2;
const EXIT_UNRESOLVED: u8 = 3;
const EXIT_NO_CANDIDATES: u8 = 4;

fn emit(config: &CliConfig, text: impl FnOnce() -> String, doc: impl FnOnce() -> Json) {
    match config.output_format {
        OutputFormat::Text => {
            let text = text();
            if !text.is_empty() {
                println!("{text}");
            }
        }
        OutputFormat::Json => println!("{}", doc()),
    }
}

fn warn_diagnostics(source: &Path, diagnostics: &[Diagnostic]) {
    for d in diagnostics {
        eprintln!("warning: {}: {d}", source.display());
    }
}

fn read_kb(config: &CliConfig) -> Result<KnowledgeBase> {
    let text = fs::read_to_string(&config.kb_path)
        .with_context(|| format!("cannot read kb {}", config.kb_path.display()))?;
    let (kb, report) = load_facts(&text);
    warn_diagnostics(&config.kb_path, &report.diagnostics);
    Ok(kb)
}

fn write_kb(path: &Path, kb: &KnowledgeBase) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, save_facts(kb))
        .with_context(|| format!("cannot write kb {}", path.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("cannot write kb {}", path.display()))
}

fn diagnostic_json(d: &Diagnostic) -> Json {
    json!({ "line": d.line, "column": d.column, "message": d.to_string() })
}

fn ids_json(ids: &[Id]) -> Json {
    ids.iter().map(Id::as_str).collect::<Vec<_>>().into()
}

fn ids_text(ids: &[Id]) -> String {
    ids.iter().map(Id::as_str).collect::<Vec<_>>().join("\n")
}

fn render_pair(pair: &AvPair) -> String {
    let values = pair
        .values
        .iter()
        .map(|v| match v.rank {
            Some(rank) => format!("({:?}, {rank})", v.term.as_str()),
            None => format!("{:?}", v.term.as_str()),
        })
        .collect::<Vec<_>>()
        .join(", ");
    match &pair.attribute {
        Some(a) => format!("({:?}, [{values}])", a.as_str()),
        None => format!("(_, [{values}])"),
    }
}

pub fn ingest(config: &CliConfig, input: &Path) -> Result<u8> {
    let text =
        fs::read_to_string(input).with_context(|| format!("cannot read {}", input.display()))?;
    let mut kb = if config.kb_path.exists() {
        read_kb(config)?
    } else {
        KnowledgeBase::new()
    };
    let report = load_facts_into(&mut kb, &text);
    write_kb(&config.kb_path, &kb)?;

    for d in &report.diagnostics {
        eprintln!("{}: {d}", input.display());
    }
    let rejected = report.diagnostics.len();
    emit(
        config,
        || format!("{} objects loaded, {rejected} rejected", report.inserted),
        || {
            json!({
                "loaded": report.inserted,
                "rejected": rejected,
                "diagnostics": report.diagnostics.iter().map(diagnostic_json).collect::<Vec<_>>(),
            })
        },
    );
    Ok(if rejected == 0 { EXIT_OK } else { EXIT_PARTIAL })
}

pub fn classify(config: &CliConfig) -> Result<u8> {
    let kb = read_kb(config)?;
    let states: Vec<(&Id, ExplicitnessState)> = kb.objects().map(|o| (o.id(), o.state())).collect();
    let count = |s| states.iter().filter(|(_, st)| *st == s).count();
    let (explicit, implicit) = (
        count(ExplicitnessState::Explicit),
        count(ExplicitnessState::Implicit),
    );
    emit(
        config,
        || {
            let mut out = if states.is_empty() {
                "0 objects".to_string()
            } else {
                format!(
                    "{} objects: {explicit} explicit, {implicit} implicit",
                    states.len()
                )
            };
            for (id, state) in &states {
                out.push_str(&format!("\n{id}\t{state}"));
            }
            out
        },
        || {
            let objects: BTreeMap<&str, String> = states
                .iter()
                .map(|(id, s)| (id.as_str(), s.to_string()))
                .collect();
            json!({
                "total": states.len(),
                "explicit": explicit,
                "implicit": implicit,
                "objects": objects,
            })
        },
    );
    Ok(EXIT_OK)
}

pub fn explicate(config: &CliConfig, raw_id: &str) -> Result<u8> {
    let kb = read_kb(config)?;
    let id = Id::new(raw_id)?;
    let object = kb
        .object(&id)
        .ok_or_else(|| anyhow!("unknown annotation id {id}"))?;
    match explicate_object(&kb, object, config.cap) {
        Err(InferenceError::NotImplicit(state)) => {
            emit(
                config,
                || format!("{id} is already explicit"),
                || json!({ "id": id.as_str(), "state": state.to_string(), "candidates": [] }),
            );
            if state == ExplicitnessState::Invalid {
                return Err(anyhow!("{id} is invalid"));
            }
            Ok(EXIT_OK)
        }
        Err(InferenceError::NoCandidates { pair_index }) => {
            let pair = render_pair(&object.pairs()[pair_index]);
            eprintln!("no candidates for pair {pair_index} {pair}");
            emit(
                config,
                String::new,
                || json!({ "id": id.as_str(), "no_candidates_for_pair": pair_index, "candidates": [] }),
            );
            Ok(EXIT_NO_CANDIDATES)
        }
        Ok(readings) => {
            emit(
                config,
                || {
                    let mut out = format!("{} candidate(s) for {id}", readings.len());
                    for (rank, reading) in readings.iter().enumerate() {
                        let pairs: Vec<String> =
                            reading.object.pairs().iter().map(render_pair).collect();
                        out.push_str(&format!("\n{}. {}", rank + 1, pairs.join(" ; ")));
                        for sub in &reading.provenance {
                            let support: Vec<&str> = sub.support.iter().map(Id::as_str).collect();
                            out.push_str(&format!(
                                "\n   pair {} support: {}",
                                sub.pair_index,
                                support.join(", ")
                            ));
                        }
                    }
                    out
                },
                || {
                    let candidates: Vec<Json> = readings
                        .iter()
                        .map(|r| {
                            json!({
                                "pairs": r.object.pairs().iter().map(render_pair).collect::<Vec<_>>(),
                                "provenance": r.provenance.iter().map(|s| json!({
                                    "pair": s.pair_index,
                                    "support": ids_json(&s.support),
                                })).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    json!({ "id": id.as_str(), "candidates": candidates })
                },
            );
            Ok(EXIT_OK)
        }
    }
}

pub fn query(config: &CliConfig, expr_text: &str) -> Result<u8> {
    let kb = read_kb(config)?;
    let expr = match query::parse(expr_text) {
        Ok(expr) => expr,
        Err(err) => return Err(anyhow!("{err}\n{}", err.caret(expr_text))),
    };
    let ids = match query::eval(&kb, &expr) {
        Ok(ids) => ids,
        Err(QueryError::UnresolvedCriterion) => {
            return Err(anyhow!(
                "query has a criterion without attribute; use `find` for constrained search"
            ))
        }
        Err(err) => return Err(err.into()),
    };
    emit(
        config,
        || ids_text(&ids),
        || json!({ "query": expr.print(), "results": ids_json(&ids) }),
    );
    Ok(EXIT_OK)
}

pub fn find(config: &CliConfig, raw_terms: &[String], show_value_lists: bool) -> Result<u8> {
    let kb = read_kb(config)?;
    let terms = raw_terms
        .iter()
        .map(|t| Term::new(t).with_context(|| format!("bad term {t:?}")))
        .collect::<Result<Vec<_>>>()?;
    let joined = |ts: &[Term]| ts.iter().map(Term::as_str).collect::<Vec<_>>().join(", ");

    let report = match query::rewrite_constrained(&kb, &terms) {
        Ok(report) => report,
        Err(QueryError::AllUnresolved { terms }) => {
            emit(
                config,
                || format!("unresolved: {}", joined(&terms)),
                || {
                    json!({
                        "rewrite": Json::Null,
                        "unresolved": terms.iter().map(Term::as_str).collect::<Vec<_>>(),
                        "results": [],
                    })
                },
            );
            return Ok(EXIT_UNRESOLVED);
        }
        Err(err) => return Err(err.into()),
    };
    let mode = if config.strict {
        SearchMode::Strict
    } else {
        SearchMode::Lenient
    };
    let unresolved = &report.unresolved_terms;
    let ids = if mode == SearchMode::Strict && !unresolved.is_empty() {
        Vec::new()
    } else {
        if !unresolved.is_empty() {
            eprintln!(
                "warning: dropped unresolved term(s): {}",
                joined(unresolved)
            );
        }
        query::eval(&kb, &report.rewritten)?
    };
    let shown = show_value_lists.then(|| query::value_list_form(&kb, &report));

    emit(
        config,
        || {
            let mut out = format!("rewrite: {}", report.rewritten);
            if let Some(shown) = &shown {
                out.push_str(&format!("\nvalue lists: {shown}"));
            }
            if !unresolved.is_empty() {
                out.push_str(&format!("\nunresolved: {}", joined(unresolved)));
            }
            if !ids.is_empty() {
                out.push('\n');
                out.push_str(&ids_text(&ids));
            }
            out
        },
        || {
            let candidates: BTreeMap<&str, Vec<Json>> = report
                .per_term_candidates
                .iter()
                .map(|(t, cs)| {
                    let list = cs
                        .iter()
                        .map(|c| json!({ "attribute": c.attribute.as_str(), "support": ids_json(&c.support) }))
                        .collect();
                    (t.as_str(), list)
                })
                .collect();
            let mut doc = json!({
                "rewrite": report.rewritten.print(),
                "candidates": candidates,
                "unresolved": unresolved.iter().map(Term::as_str).collect::<Vec<_>>(),
                "results": ids_json(&ids),
            });
            if let Some(shown) = &shown {
                doc["value_list_form"] = shown.as_str().into();
            }
            doc
        },
    );
    Ok(if mode == SearchMode::Strict && !unresolved.is_empty() {
        EXIT_UNRESOLVED
    } else {
        EXIT_OK
    })
}

pub fn chain(config: &CliConfig, raw_id: &str) -> Result<u8> {
    let kb = read_kb(config)?;
    let chain = kb.trace_chain(&Id::new(raw_id)?)?;
    emit(
        config,
        || {
            chain
                .iter()
                .map(Id::as_str)
                .collect::<Vec<_>>()
                .join(" -> ")
        },
        || json!({ "chain": ids_json(&chain) }),
    );
    Ok(EXIT_OK)
}

pub fn export(config: &CliConfig) -> Result<u8> {
    let kb = read_kb(config)?;
    let facts = save_facts(&kb);
    match config.output_format {
        OutputFormat::Text => print!("{facts}"),
        OutputFormat::Json => println!("{}", json!({ "facts": facts })),
    }
    Ok(EXIT_OK)
}

pub fn stats(config: &CliConfig) -> Result<u8> {
    let kb = read_kb(config)?;
    let explicit = kb
        .objects()
        .filter(|o| o.state() == ExplicitnessState::Explicit)
        .count();
    let tiers = [Tier::Primary, Tier::Secondary, Tier::Tertiary].map(|tier| {
        (
            tier.keyword(),
            kb.documents().filter(|d| d.tier == tier).count(),
        )
    });
    let annotators = kb.annotators().count();
    let attributes = kb.attribute_index().len();
    let terms = kb.term_index().len();
    emit(
        config,
        || {
            let mut out = format!(
                "objects: {} ({explicit} explicit, {} implicit)",
                kb.len(),
                kb.len() - explicit
            );
            for (tier, n) in tiers {
                out.push_str(&format!("\n{tier} documents: {n}"));
            }
            out.push_str(&format!(
                "\nannotators: {annotators}\nattributes: {attributes}\nterms: {terms}"
            ));
            out
        },
        || {
            json!({
                "objects": kb.len(),
                "explicit": explicit,
                "implicit": kb.len() - explicit,
                "documents": tiers.iter().map(|(t, n)| (t.to_string(), json!(n))).collect::<serde_json::Map<_, _>>(),
                "annotators": annotators,
                "attributes": attributes,
                "terms": terms,
            })
        },
    );
    Ok(EXIT_OK)
}
