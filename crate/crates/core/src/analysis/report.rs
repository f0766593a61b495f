use std::fmt;

/// One verification result, serialized as
/// `CHECK <name> <pass|fail> <observed> <bound>`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub observed: f64,
    pub bound: f64,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, pass: bool, observed: f64, bound: f64) -> Self {
        let name = name.into().replace(char::is_whitespace, "_");
        Self {
            name,
            pass,
            observed,
            bound,
        }
    }

    /// Passes when `observed <= bound`.
    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(name, observed <= bound, observed, bound)
    }

    /// Passes when `observed >= bound`.
    pub fn at_least(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(name, observed >= bound, observed, bound)
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} {:.10e} {:.10e}",
            self.name,
            if self.pass { "pass" } else { "fail" },
            self.observed,
            self.bound
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub lines: Vec<CheckLine>,
}

impl Report {
    pub fn push(&mut self, line: CheckLine) {
        self.lines.push(line);
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.pass)
    }

    /// Parses the line format back; unrecognized lines are skipped.
    pub fn parse(text: &str) -> Report {
        let lines = text
            .lines()
            .filter_map(|line| {
                let mut it = line.split_whitespace();
                if it.next()? != "CHECK" {
                    return None;
                }
                let name = it.next()?.to_string();
                let pass = match it.next()? {
                    "pass" => true,
                    "fail" => false,
                    _ => return None,
                };
                let observed = it.next()?.parse().ok()?;
                let bound = it.next()?.parse().ok()?;
                Some(CheckLine {
                    name,
                    pass,
                    observed,
                    bound,
                })
            })
            .collect();
        Report { lines }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
