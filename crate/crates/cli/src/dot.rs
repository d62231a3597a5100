use std::collections::BTreeSet;
use std::fmt::Write as _;

use eap::model::{Action, CompatConstraint, Object, Relations};

/// Renders an action or a process. Process actions become clusters with an
/// invisible anchor that process-level edges attach to.
pub fn render(obj: &Object) -> String {
    let mut out = String::from("digraph eap {\n");
    match obj {
        Object::Action(a) => action_body(&mut out, a, "", "  "),
        Object::Process(p) => {
            out.push_str("  compound=true;\n");
            for (id, a) in p.elements() {
                writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{id}"))).unwrap();
                writeln!(out, "    label={};", quote(id)).unwrap();
                writeln!(out, "    {} [shape=point, style=invis];", quote(id)).unwrap();
                action_body(&mut out, a, &format!("{id}."), "    ");
                out.push_str("  }\n");
            }
            edges(&mut out, p.relations(), p.constraints(), "");
        }
    }
    out.push_str("}\n");
    out
}

fn action_body(out: &mut String, a: &Action, prefix: &str, indent: &str) {
    for (id, e) in a.elements() {
        writeln!(
            out,
            "{indent}{} [label={}];",
            quote(&format!("{prefix}{id}")),
            quote(&e.to_string())
        )
        .unwrap();
    }
    let mut inner = String::new();
    edges(&mut inner, a.relations(), a.constraints(), prefix);
    for line in inner.lines() {
        writeln!(out, "{indent}{}", line.trim_start()).unwrap();
    }
}

fn edges(out: &mut String, relations: &Relations, constraints: &BTreeSet<CompatConstraint>, prefix: &str) {
    let node = |id: &str| quote(&format!("{prefix}{id}"));
    for (label, pairs) in relations {
        for (x, y) in pairs {
            writeln!(out, "  {} -> {} [label={}];", node(x), node(y), quote(label)).unwrap();
        }
    }
    for c in constraints {
        let style = if c.mode.as_str().contains("incompatible") {
            "dashed"
        } else {
            "dotted"
        };
        writeln!(
            out,
            "  {} -> {} [label={}, style={style}];",
            node(&c.from),
            node(&c.to),
            quote(c.mode.as_str())
        )
        .unwrap();
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
