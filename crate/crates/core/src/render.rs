//! Output forms for proof trees: plain-text inference lines, LaTeX `\infer`
//! nests, and the JSON wire format.

use crate::calculus::{Level, ProofTree, Rule, Sequent};
use crate::formula::Formula;
use crate::parser::parse;
use serde_json::{json, Value};
use thiserror::Error;

fn rule_label(rule: &Rule) -> String {
    match rule {
        Rule::InitId => "(init)".into(),
        Rule::InitBot => "(⊥)".into(),
        Rule::Cut(_) => "(cut)".into(),
        Rule::Weakening => "(wk)".into(),
        Rule::ImpL(_) => "(→L)".into(),
        Rule::ImpR(_) => "(→R)".into(),
        Rule::BoxGL(_) => "(□GL)".into(),
        Rule::BoxL(_) => "(□L)".into(),
        Rule::LevelLift => "(⇒⇛)".into(),
    }
}

struct Block {
    lines: Vec<String>,
    /// Width of the sequent/bar column; rule labels may overhang to the
    /// right of it.
    content_width: usize,
    /// Width including label overhang.
    full_width: usize,
}

fn width(s: &str) -> usize {
    s.chars().count()
}

fn pad_center(s: &str, total: usize) -> String {
    let w = width(s);
    if w >= total {
        return s.to_string();
    }
    format!("{}{}", " ".repeat((total - w) / 2), s)
}

fn indent_lines(lines: &mut [String], by: usize) {
    if by == 0 {
        return;
    }
    let pad = " ".repeat(by);
    for line in lines.iter_mut() {
        if !line.is_empty() {
            *line = format!("{pad}{line}");
        }
    }
}

fn layout(tree: &ProofTree) -> Block {
    let conclusion = tree.conclusion.to_string();
    let label = rule_label(&tree.rule);
    let premise_blocks: Vec<Block> = tree.premises.iter().map(layout).collect();

    // Join premise blocks horizontally, bottom-aligned, keeping each block's
    // internal alignment; a block's label overhang pushes its right neighbour
    // further out.
    let mut premise_lines: Vec<String> = Vec::new();
    let mut premises_content = 0;
    let mut premises_full = 0;
    if !premise_blocks.is_empty() {
        let height = premise_blocks.iter().map(|b| b.lines.len()).max().unwrap();
        premise_lines = vec![String::new(); height];
        let mut offset = 0usize;
        for block in &premise_blocks {
            let top = height - block.lines.len();
            for (i, line) in block.lines.iter().enumerate() {
                let row = &mut premise_lines[top + i];
                let current = width(row);
                row.push_str(&" ".repeat(offset.saturating_sub(current)));
                row.push_str(line);
            }
            premises_content = offset + block.content_width;
            premises_full = premises_full.max(offset + block.full_width);
            offset += (block.content_width + 3).max(block.full_width + 1);
        }
    }

    let bar_width = premises_content.max(width(&conclusion));
    let premise_indent = (bar_width - premises_content) / 2;
    indent_lines(&mut premise_lines, premise_indent);
    premises_full += premise_indent;

    let mut lines = premise_lines;
    lines.push(format!("{} {}", "─".repeat(bar_width), label));
    lines.push(pad_center(&conclusion, bar_width));

    Block {
        lines,
        content_width: bar_width,
        full_width: premises_full.max(bar_width + 1 + width(&label)),
    }
}

/// Render a proof tree as stacked inference lines, premises above their
/// conclusions.
pub fn proof_to_text(tree: &ProofTree) -> String {
    layout(tree)
        .lines
        .iter()
        .map(|l| l.trim_end())
        .collect::<Vec<_>>()
        .join("\n")
}

fn formula_to_latex(f: &Formula) -> String {
    match f {
        Formula::Var(name) => name.replace('_', r"\_"),
        Formula::Bot => r"\bot".into(),
        Formula::Box(a) => {
            if matches!(**a, Formula::Imp(..)) {
                format!(r"\Box({})", formula_to_latex(a))
            } else {
                format!(r"\Box {}", formula_to_latex(a))
            }
        }
        Formula::Imp(a, b) => {
            let left = if matches!(**a, Formula::Imp(..)) {
                format!("({})", formula_to_latex(a))
            } else {
                formula_to_latex(a)
            };
            format!(r"{} \to {}", left, formula_to_latex(b))
        }
    }
}

fn sequent_to_latex(s: &Sequent) -> String {
    let join = |side: &crate::formula::FormulaSet| {
        side.iter()
            .map(formula_to_latex)
            .collect::<Vec<_>>()
            .join(", ")
    };
    let arrow = match s.level {
        Level::First => r"\Rightarrow",
        Level::Second => r"\Rrightarrow",
    };
    format!("{} {} {}", join(&s.antecedent), arrow, join(&s.succedent))
        .trim()
        .to_string()
}

fn latex_label(rule: &Rule) -> &'static str {
    match rule {
        Rule::InitId => r"\mbox{(init)}",
        Rule::InitBot => r"\mbox{($\bot$)}",
        Rule::Cut(_) => r"\mbox{(cut)}",
        Rule::Weakening => r"\mbox{(weakening)}",
        Rule::ImpL(_) => r"\mbox{($\to$L)}",
        Rule::ImpR(_) => r"\mbox{($\to$R)}",
        Rule::BoxGL(_) => r"\mbox{($\Box_{\mathrm{GL}}$)}",
        Rule::BoxL(_) => r"\mbox{($\Box$L)}",
        Rule::LevelLift => r"\mbox{($\Rightarrow\Rrightarrow$)}",
    }
}

fn latex_node(tree: &ProofTree, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let conclusion = sequent_to_latex(&tree.conclusion);
    if tree.premises.is_empty() {
        out.push_str(&format!(
            "{pad}\\infer[{}]{{{conclusion}}}{{}}",
            latex_label(&tree.rule)
        ));
        return;
    }
    out.push_str(&format!(
        "{pad}\\infer[{}]{{{conclusion}}}{{%\n",
        latex_label(&tree.rule)
    ));
    for (i, premise) in tree.premises.iter().enumerate() {
        latex_node(premise, indent + 1, out);
        if i + 1 < tree.premises.len() {
            out.push_str("\n&\n");
        }
    }
    out.push_str(&format!("\n{pad}}}"));
}

/// Render a proof tree as a nested `\infer` term (`proof.sty` style).
pub fn proof_to_latex(tree: &ProofTree) -> String {
    let mut out = String::new();
    latex_node(tree, 0, &mut out);
    out
}

fn level_str(level: Level) -> &'static str {
    match level {
        Level::First => "first",
        Level::Second => "second",
    }
}

fn side_to_json(side: &crate::formula::FormulaSet) -> Value {
    Value::Array(side.iter().map(|f| Value::String(f.to_string())).collect())
}

pub fn sequent_to_json(s: &Sequent) -> Value {
    json!({
        "level": level_str(s.level),
        "ant": side_to_json(&s.antecedent),
        "suc": side_to_json(&s.succedent),
    })
}

/// JSON form of a proof tree:
/// `{"conclusion": {"level", "ant", "suc"}, "rule", "principal"?, "premises"}`.
pub fn proof_to_json(tree: &ProofTree) -> Value {
    let mut node = json!({
        "conclusion": sequent_to_json(&tree.conclusion),
        "rule": tree.rule.name(),
        "premises": tree.premises.iter().map(proof_to_json).collect::<Vec<_>>(),
    });
    if let Some(principal) = tree.rule.principal() {
        node["principal"] = Value::String(principal.to_string());
    }
    node
}

#[derive(Debug, Error)]
pub enum ProofJsonError {
    #[error("proof JSON: {0}")]
    Shape(String),
    #[error("proof JSON: bad formula '{text}': {source}")]
    Formula {
        text: String,
        source: crate::parser::ParseError,
    },
}

fn formula_from_json(value: &Value) -> Result<Formula, ProofJsonError> {
    let text = value
        .as_str()
        .ok_or_else(|| ProofJsonError::Shape("formula must be a string".into()))?;
    parse(text).map_err(|source| ProofJsonError::Formula {
        text: text.to_string(),
        source,
    })
}

fn side_from_json(value: &Value) -> Result<crate::formula::FormulaSet, ProofJsonError> {
    value
        .as_array()
        .ok_or_else(|| ProofJsonError::Shape("sequent side must be an array".into()))?
        .iter()
        .map(formula_from_json)
        .collect()
}

pub fn sequent_from_json(value: &Value) -> Result<Sequent, ProofJsonError> {
    let level = match value.get("level").and_then(Value::as_str) {
        Some("first") => Level::First,
        Some("second") => Level::Second,
        other => {
            return Err(ProofJsonError::Shape(format!(
                "level must be \"first\" or \"second\", found {other:?}"
            )))
        }
    };
    Ok(Sequent {
        level,
        antecedent: side_from_json(
            value
                .get("ant")
                .ok_or_else(|| ProofJsonError::Shape("missing 'ant'".into()))?,
        )?,
        succedent: side_from_json(
            value
                .get("suc")
                .ok_or_else(|| ProofJsonError::Shape("missing 'suc'".into()))?,
        )?,
    })
}

pub fn proof_from_json(value: &Value) -> Result<ProofTree, ProofJsonError> {
    let conclusion = sequent_from_json(
        value
            .get("conclusion")
            .ok_or_else(|| ProofJsonError::Shape("missing 'conclusion'".into()))?,
    )?;
    let rule_name = value
        .get("rule")
        .and_then(Value::as_str)
        .ok_or_else(|| ProofJsonError::Shape("missing 'rule'".into()))?;
    let principal = match value.get("principal") {
        Some(v) => Some(formula_from_json(v)?),
        None => None,
    };
    let need_principal = || {
        principal
            .clone()
            .ok_or_else(|| ProofJsonError::Shape(format!("rule {rule_name} needs a principal")))
    };
    let rule = match rule_name {
        "init" => Rule::InitId,
        "init-bot" => Rule::InitBot,
        "cut" => Rule::Cut(need_principal()?),
        "weakening" => Rule::Weakening,
        "imp-l" => Rule::ImpL(need_principal()?),
        "imp-r" => Rule::ImpR(need_principal()?),
        "box-gl" => Rule::BoxGL(need_principal()?),
        "box-l" => Rule::BoxL(need_principal()?),
        "level-lift" => Rule::LevelLift,
        other => return Err(ProofJsonError::Shape(format!("unknown rule '{other}'"))),
    };
    let premises = value
        .get("premises")
        .and_then(Value::as_array)
        .ok_or_else(|| ProofJsonError::Shape("missing 'premises'".into()))?
        .iter()
        .map(proof_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProofTree::new(conclusion, rule, premises))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn reflection_proof() -> ProofTree {
        let f = |t: &str| parse(t).unwrap();
        let init = ProofTree::leaf(Sequent::second([f("p")], [f("p")]), Rule::InitId);
        let boxl = ProofTree::new(
            Sequent::second([f("[]p")], [f("p")]),
            Rule::BoxL(f("[]p")),
            vec![init],
        );
        ProofTree::new(
            Sequent::second([], [f("[]p -> p")]),
            Rule::ImpR(f("[]p -> p")),
            vec![boxl],
        )
    }

    #[test]
    fn text_render_stacks_inference_lines() {
        let text = proof_to_text(&reflection_proof());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].contains("(init)"));
        assert!(lines[1].contains("p ⇛ p"));
        assert!(lines[2].contains("(□L)"));
        assert!(lines[3].contains("[]p ⇛ p"));
        assert!(lines[4].contains("(→R)"));
        assert!(lines[5].contains("⇛ []p -> p"));
    }

    #[test]
    fn json_round_trip() {
        let tree = reflection_proof();
        let value = proof_to_json(&tree);
        assert_eq!(value["rule"], "imp-r");
        assert_eq!(value["principal"], "[]p -> p");
        assert_eq!(value["conclusion"]["level"], "second");
        let back = proof_from_json(&value).unwrap();
        assert_eq!(back, tree);
    }

    #[test]
    fn json_rejects_unknown_rule() {
        let value = serde_json::json!({
            "conclusion": {"level": "first", "ant": [], "suc": ["p"]},
            "rule": "modus-ponens",
            "premises": [],
        });
        assert!(proof_from_json(&value).is_err());
    }

    #[test]
    fn latex_uses_infer_macros() {
        let latex = proof_to_latex(&reflection_proof());
        assert!(latex.contains(r"\infer[\mbox{($\to$R)}]"));
        assert!(latex.contains(r"\Rrightarrow \Box p \to p"));
        assert!(latex.contains(r"\infer[\mbox{($\Box$L)}]"));
    }
}
