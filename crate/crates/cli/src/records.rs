use std::fmt::{Display, Write};

use spanner_core::graph::{Bound, Dist, EdgeSet, Graph, VerifyReport, INF};

pub fn dist(d: Dist) -> String {
    if d == INF {
        "inf".into()
    } else {
        d.to_string()
    }
}

/// Solution file text: one `u v` line per edge, readable by `verify --solution`.
pub fn edge_lines(g: &Graph, h: &EdgeSet) -> String {
    h.ids().iter().map(|&e| g.edge(e)).fold(String::new(), |mut out, (u, v)| {
        writeln!(out, "{u} {v}").unwrap();
        out
    })
}

/// Line-oriented `key=value` output, buffered so a failing command prints nothing partial.
pub struct Records(String);

impl Records {
    pub fn new(command: &str) -> Self {
        Records(format!("command={command}\n"))
    }

    pub fn kv(&mut self, key: &str, value: impl Display) -> &mut Self {
        writeln!(self.0, "{key}={value}").unwrap();
        self
    }

    pub fn line(&mut self, text: impl Display) -> &mut Self {
        writeln!(self.0, "{text}").unwrap();
        self
    }

    /// Embedded file text, fenced by `begin`/`end` lines.
    pub fn block(&mut self, text: &str) {
        self.0.push_str("begin\n");
        self.0.push_str(text);
        self.0.push_str("end\n");
    }

    pub fn pairs(&mut self, report: &VerifyReport) {
        for p in &report.pairs {
            let bound = match p.demand.bound {
                Bound::Exact => "-".to_string(),
                Bound::AtMost(b) => b.to_string(),
                Bound::Unbounded => "*".to_string(),
            };
            self.line(format!(
                "pair s={} t={} bound={bound} d_g={} d_h={} ok={}",
                p.demand.s,
                p.demand.t,
                dist(p.original),
                dist(p.achieved),
                p.satisfied
            ));
        }
    }

    pub fn print(&self) {
        print!("{}", self.0);
    }
}
