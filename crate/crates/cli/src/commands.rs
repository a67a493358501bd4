use std::fs;
use std::io::Write;
use std::path::Path;

use raag_core::cover::cover_homology;
use raag_core::gradients::{
    measure, predict, report, steps_from_chain, ChainStep, PredictInput, Rational, ReportPolicy,
};
use raag_core::graph::{classify, cliques, product_graph, SimplicialGraph};
use raag_core::hierarchy::{center_rank, chi_tree, decompose, level, DecompositionTree};
use raag_core::homology::{betti_csv, euler_char_cliques, FlagComplex};
use raag_core::quotients::{
    chain, fiber_action, make_congruence, quotient_from_json, FiniteQuotient, QuotientError,
};
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_DOMAIN, EXIT_PARSE, EXIT_USAGE};
use crate::{BettiArgs, ChainArgs, Command, Common, CoverArgs, FiberArgs, Format, GradientArgs};

struct Output {
    json: Value,
    text: Option<String>,
    csv: Option<String>,
}

pub fn run(command: Command) -> Result<(), CliError> {
    let (common, default, out) = match command {
        Command::Classify(a) => (a.common, Format::Text, classify_cmd(&a.graph)?),
        Command::Decompose(a) => {
            let out = decompose_cmd(&a.graph)?;
            (a.common, Format::Json, out)
        }
        Command::Chi(a) => (a.common, Format::Text, chi_cmd(&a.graph)?),
        Command::Betti(a) => {
            let out = betti_cmd(&a)?;
            (a.common, Format::Json, out)
        }
        Command::Cover(a) => {
            let out = cover_cmd(&a)?;
            (a.common, Format::Json, out)
        }
        Command::Gradient(a) => {
            let out = gradient_cmd(&a)?;
            (a.common, Format::Json, out)
        }
        Command::Fiber(a) => {
            let out = fiber_cmd(&a)?;
            (a.common, Format::Json, out)
        }
    };
    emit(&common, default, out)
}

fn emit(common: &Common, default: Format, out: Output) -> Result<(), CliError> {
    let format = common.format.unwrap_or(default);
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("json renders");
            s.push('\n');
            s
        }
        Format::Text => out.text.ok_or_else(|| CliError::usage("text output is not available here"))?,
        Format::Csv => out.csv.ok_or_else(|| CliError::usage("csv output is not available here"))?,
    };
    match &common.output {
        Some(path) => fs::write(path, body).map_err(|e| {
            CliError::new(EXIT_USAGE, "io.write", format!("{}: {e}", path.display()))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::new(EXIT_USAGE, "io.write", e.to_string()))
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_PARSE, "io.read", format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<SimplicialGraph, CliError> {
    let text = read_text(path)?;
    raag_core::graph::parse_graph(&text).map_err(|e| {
        let mut err = CliError::from(e);
        err.message = format!("{}: {}", path.display(), err.message);
        err
    })
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::new(EXIT_PARSE, "json.syntax", format!("{}: {e}", path.display())))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn classify_cmd(path: &Path) -> Result<Output, CliError> {
    let g = read_graph(path)?;
    let c = classify(&g);
    let text = match &c.witness {
        Some(w) => format!(
            "not Droms (induced {}: {}); chordal: {}\n",
            w.pattern,
            w.vertices.join(","),
            yes_no(c.is_chordal)
        ),
        None => format!("Droms; chordal: {}\n", yes_no(c.is_chordal)),
    };
    let json = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "classification": c,
    });
    Ok(Output {
        json,
        text: Some(text),
        csv: None,
    })
}

fn tree_text(t: &DecompositionTree, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match t {
        DecompositionTree::Free { rank, vertices } => {
            out.push_str(&format!("{pad}F_{rank} {{{}}}\n", vertices.join(", ")));
        }
        DecompositionTree::Product { m, child, vertices } => {
            let central: Vec<&String> = vertices
                .iter()
                .filter(|v| !child.vertices().contains(v))
                .collect();
            let names: Vec<&str> = central.iter().map(|s| s.as_str()).collect();
            out.push_str(&format!("{pad}Z^{m} {{{}}} x\n", names.join(", ")));
            tree_text(child, depth + 1, out);
        }
        DecompositionTree::FreeProduct { children, .. } => {
            out.push_str(&format!("{pad}free product of {}\n", children.len()));
            for c in children {
                tree_text(c, depth + 1, out);
            }
        }
    }
}

fn decompose_cmd(path: &Path) -> Result<Output, CliError> {
    let g = read_graph(path)?;
    let tree = decompose(&g)?;
    let lvl = level(&tree);
    let chi = chi_tree(&tree);
    let mut text = String::new();
    tree_text(&tree, 0, &mut text);
    text.push_str(&format!("level = {lvl}\nchi = {chi}\n"));
    let json = json!({
        "tree": tree.to_json(),
        "level": lvl,
        "chi": chi,
        "center_rank": center_rank(&g),
    });
    Ok(Output {
        json,
        text: Some(text),
        csv: None,
    })
}

fn chi_cmd(path: &Path) -> Result<Output, CliError> {
    let g = read_graph(path)?;
    let chi = euler_char_cliques(&g);
    let counts = cliques(&g).counts();
    let tree_chi = decompose(&g).ok().map(|t| chi_tree(&t));
    Ok(Output {
        json: json!({ "chi": chi, "clique_counts": counts, "chi_tree": tree_chi }),
        text: Some(format!("chi = {chi}\n")),
        csv: None,
    })
}

fn truncate<T: Clone>(v: &[T], max: Option<usize>, what: &str) -> Result<Vec<T>, CliError> {
    match max {
        Some(m) if m >= v.len() => Err(CliError::new(
            EXIT_DOMAIN,
            "degree_out_of_range",
            format!("{what} is available up to degree {}, asked for {m}", v.len() - 1),
        )),
        Some(m) => Ok(v[..=m].to_vec()),
        None => Ok(v.to_vec()),
    }
}

fn betti_cmd(a: &BettiArgs) -> Result<Output, CliError> {
    let g = read_graph(&a.graph)?;
    let all = FlagComplex::new(&g).reduced_betti_numbers(a.field);
    let betti = truncate(&all, a.max_dim, "reduced homology")?;
    let text: String = betti
        .iter()
        .enumerate()
        .map(|(j, b)| format!("b{j} = {b}\n"))
        .collect();
    Ok(Output {
        json: json!({ "field": a.field, "reduced_betti": betti }),
        csv: Some(betti_csv(&betti, a.field)),
        text: Some(text),
    })
}

fn load_quotient(g: &SimplicialGraph, path: &Path) -> Result<FiniteQuotient, CliError> {
    let doc = read_json(path)?;
    quotient_from_json(g, &doc).map_err(|e| match e {
        QuotientError::Malformed(_) => {
            CliError::new(EXIT_PARSE, e.code(), format!("{}: {e}", path.display()))
        }
        other => other.into(),
    })
}

fn single_modulus(chain: &ChainArgs) -> Result<u64, CliError> {
    match chain.moduli() {
        Some([m]) => Ok(*m),
        Some(_) => Err(CliError::usage("cover takes exactly one modulus")),
        None => Err(CliError::usage("give --chain M or --quotient FILE")),
    }
}

fn ratio_string(dim: usize, n: usize) -> String {
    Rational::new(dim as i64, n as i64).to_string()
}

fn cover_cmd(a: &CoverArgs) -> Result<Output, CliError> {
    let g = read_graph(&a.graph)?;
    let q = match &a.quotient {
        Some(path) => load_quotient(&g, path)?,
        None => make_congruence(&g, single_modulus(&a.chain)?, a.chain.cap)?,
    };
    let action = q.regular_action();
    let n = action.degree();
    let all = cover_homology(&g, &action, a.field)?;
    let dims = truncate(&all, a.max_dim, "cover homology")?;
    let euler_sum: i64 = all
        .iter()
        .enumerate()
        .map(|(j, &d)| if j % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum();
    let ratios: Vec<String> = dims.iter().map(|&d| ratio_string(d, n)).collect();
    let text: String = dims
        .iter()
        .zip(&ratios)
        .enumerate()
        .map(|(j, (d, r))| format!("H_{j}: {d} (ratio {r})\n"))
        .collect();
    let json = json!({
        "field": a.field,
        "index": n,
        "origin": q.origin(),
        "clique_counts": cliques(&g).counts(),
        "dims": dims,
        "ratios": ratios,
        "euler_sum": euler_sum,
        "euler_expected": n as i64 * euler_char_cliques(&g),
    });
    Ok(Output {
        json,
        csv: Some(raag_core::cover::homology_csv(&dims, n, a.field)),
        text: Some(text),
    })
}

fn is_divisibility_chain(moduli: &[u64]) -> bool {
    moduli.windows(2).all(|w| w[0] < w[1] && w[1] % w[0] == 0)
}

fn gradient_cmd(a: &GradientArgs) -> Result<Output, CliError> {
    let g = read_graph(&a.graph)?;
    let factors = a
        .product_of
        .as_ref()
        .map(|paths| paths.iter().map(|p| read_graph(p)).collect::<Result<Vec<_>, _>>())
        .transpose()?;
    let moduli = a
        .chain
        .moduli()
        .ok_or_else(|| CliError::usage("give --chain or --chain-pow"))?;
    if a.nested && !is_divisibility_chain(moduli) {
        return Err(CliError::usage(
            "--nested needs increasing moduli, each dividing the next",
        ));
    }
    if let Some(fs) = &factors {
        let joined = product_graph(fs);
        if cliques(&joined).counts() != cliques(&g).counts() {
            return Err(CliError::new(
                EXIT_DOMAIN,
                "gradient.inconsistent",
                "the graph does not match the product of the given factors",
            ));
        }
    }
    let prediction = match &factors {
        Some(fs) => predict(PredictInput::Product(fs), a.field)?,
        None => predict(PredictInput::Single(&g), a.field)?,
    };
    let nested = is_divisibility_chain(moduli);
    let steps = if nested {
        steps_from_chain(&chain(&g, moduli, a.chain.cap)?)
    } else {
        moduli
            .iter()
            .map(|&m| {
                let q = make_congruence(&g, m, a.chain.cap)?;
                Ok(ChainStep {
                    action: q.regular_action(),
                    origin: q.origin(),
                })
            })
            .collect::<Result<Vec<_>, QuotientError>>()?
    };
    let top = cliques(&g).clique_number();
    let max_degree = a.max_dim.unwrap_or(top);
    let measurement = measure(&g, &steps, nested, a.field, max_degree)?;
    let rep = report(
        &prediction,
        &measurement,
        ReportPolicy {
            min_steps: a.min_steps,
        },
    );
    let mut text = format!("chi = {}\n", prediction.chi);
    if let Some(rho) = prediction.rho {
        text.push_str(&format!("rho = {rho}\n"));
    }
    for v in &rep.verdicts {
        let ratios: Vec<String> = rep.ratios_at(v.degree).iter().map(|r| r.to_string()).collect();
        text.push_str(&format!(
            "j={}: prediction {}, ratios {}: {:?}\n",
            v.degree,
            v.prediction,
            ratios.join(" "),
            v.verdict
        ));
    }
    for c in &rep.caveats {
        text.push_str(&format!("note: {c}\n"));
    }
    Ok(Output {
        json: rep.to_json(),
        csv: Some(rep.rows_csv()),
        text: Some(text),
    })
}

fn fiber_cmd(a: &FiberArgs) -> Result<Output, CliError> {
    let g1 = read_graph(&a.left)?;
    let g2 = read_graph(&a.right)?;
    let (q1, q2) = match (&a.quotients, a.chain) {
        (Some(paths), _) => (load_quotient(&g1, &paths[0])?, load_quotient(&g2, &paths[1])?),
        (None, Some(m)) => (
            make_congruence(&g1, m, a.cap)?,
            make_congruence(&g2, m, a.cap)?,
        ),
        (None, None) => return Err(CliError::usage("give --chain M or --quotients Q1 Q2")),
    };
    let iso: Vec<u32> = match &a.iso {
        Some(path) => serde_json::from_value(read_json(path)?).map_err(|e| {
            CliError::new(EXIT_PARSE, "json.schema", format!("{}: {e}", path.display()))
        })?,
        None => (0..q2.order() as u32).collect(),
    };
    let fp = fiber_action(&q1, &q2, &iso, a.cap)?;
    let check = fp.check_subdirect();
    let text = format!(
        "index = {}\nprojection indices = {}, {}\nsubdirect: {}\nfull: {}\n",
        check.index,
        check.projection_index[0],
        check.projection_index[1],
        yes_no(check.projections_surjective),
        yes_no(check.full)
    );
    let json = json!({
        "graph": fp.graph.to_json(),
        "action": fp.action.to_json(&fp.graph),
        "check": check,
    });
    Ok(Output {
        json,
        text: Some(text),
        csv: None,
    })
}
