use std::fmt::Write;

use super::engine::{leftmost_negative, merged, swapped, OpSequence};
use super::label::{commutator, Commutator, EOpLabel, EdgeWeight};
use crate::error::{HurwitzError, Result};

struct DotWriter {
    out: String,
    nodes: usize,
    max_nodes: usize,
}

fn sequence_text(labels: &[EOpLabel]) -> String {
    if labels.is_empty() {
        return "1".to_string();
    }
    labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

impl DotWriter {
    fn node(&mut self, label: &str, shape: &str) -> Result<usize> {
        if self.nodes == self.max_nodes {
            return Err(HurwitzError::InvalidArgument(format!(
                "tree has more than {} nodes",
                self.max_nodes
            )));
        }
        let id = self.nodes;
        self.nodes += 1;
        writeln!(self.out, "  n{id} [label=\"{}\", shape={shape}];", escape(label)).unwrap();
        Ok(id)
    }

    fn edge(&mut self, from: usize, to: usize, label: &str, style: &str) {
        writeln!(self.out, "  n{from} -> n{to} [label=\"{}\", style={style}];", escape(label)).unwrap();
    }

    fn visit(&mut self, labels: Vec<EOpLabel>) -> Result<usize> {
        let Some(p) = leftmost_negative(&labels) else {
            let shape = if labels.len() == 1 { "doublecircle" } else { "box" };
            return self.node(&sequence_text(&labels), shape);
        };
        if p == 0 {
            return self.node(&format!("{}  ⇒ 0", sequence_text(&labels)), "plaintext");
        }
        let id = self.node(&sequence_text(&labels), "ellipse")?;
        match commutator(&labels[p - 1], &labels[p])? {
            Commutator::Zero => {}
            Commutator::Identity(weight) => {
                let mut rest = labels.clone();
                rest.drain(p - 1..=p);
                let child = self.visit(rest)?;
                self.edge(id, child, &weight.to_string(), "solid");
            }
            Commutator::Operator { weight, label } => {
                let child = self.visit(merged(&labels, p, label))?;
                let text = match &weight {
                    EdgeWeight::Sigma(form) => format!("ς({form})"),
                    EdgeWeight::Scalar(c) => c.to_string(),
                };
                self.edge(id, child, &text, "solid");
            }
        }
        let child = self.visit(swapped(&labels, p))?;
        self.edge(id, child, "pass", "dashed");
        Ok(id)
    }
}

/// Full commutation tree as a DOT digraph. Cancelling edges are solid and
/// labelled by their structure constant, passing edges dashed. Terminal
/// nodes are boxes, single-factor terminals double circles.
pub fn tree_to_dot(ops: &OpSequence, max_nodes: usize) -> Result<String> {
    let mut writer = DotWriter {
        out: String::from("digraph commutation_tree {\n  node [fontname=\"monospace\"];\n"),
        nodes: 0,
        max_nodes,
    };
    if ops.total_energy() != 0 {
        writer.node(&format!("{}  (energy {})", sequence_text(ops.labels()), ops.total_energy()), "plaintext")?;
    } else {
        writer.visit(ops.labels().to_vec())?;
    }
    writer.out.push_str("}\n");
    Ok(writer.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;

    #[test]
    fn single_cancellation() {
        let ops = OpSequence::new(vec![EOpLabel::alpha(2), EOpLabel::alpha(-2)]);
        let dot = tree_to_dot(&ops, 100).unwrap();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("n0 -> n1 [label=\"2\""));
        assert!(dot.contains("label=\"pass\", style=dashed"));
        assert!(dot.contains("⇒ 0"));
    }

    #[test]
    fn edges_carry_linear_forms() {
        let mu = Partition::new(vec![5]).unwrap();
        let nu = Partition::new(vec![2, 2]).unwrap();
        let dot = tree_to_dot(&OpSequence::hurwitz(&mu, &nu, 1, 1), 1000).unwrap();
        assert!(dot.contains("ς(5z1)"), "{dot}");
    }

    #[test]
    fn node_budget_enforced() {
        let mu = Partition::new(vec![3, 3]).unwrap();
        let nu = Partition::new(vec![1, 1, 1, 1]).unwrap();
        assert!(tree_to_dot(&OpSequence::hurwitz(&mu, &nu, 1, 2), 5).is_err());
    }
}
