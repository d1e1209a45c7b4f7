use std::fmt;

use fluxquant::export::num;

/// Sectioned `key = value` text report.
#[derive(Debug, Default, Clone)]
pub struct Report {
    sections: Vec<(String, Vec<(String, String)>)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        self.sections.push((name.to_string(), Vec::new()));
        self
    }

    fn push(&mut self, key: &str, value: String) -> &mut Self {
        if self.sections.is_empty() {
            self.section("report");
        }
        let (_, entries) = self.sections.last_mut().expect("section exists");
        entries.push((key.to_string(), value));
        self
    }

    pub fn float(&mut self, key: &str, value: f64) -> &mut Self {
        self.push(key, num(value))
    }

    pub fn int(&mut self, key: &str, value: impl Into<i128>) -> &mut Self {
        self.push(key, value.into().to_string())
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.push(key, value.to_string())
    }

    pub fn text(&mut self, key: &str, value: &str) -> &mut Self {
        self.push(key, format!("{value:?}"))
    }

    pub fn floats(&mut self, key: &str, values: &[f64]) -> &mut Self {
        let list: Vec<String> = values.iter().map(|v| num(*v)).collect();
        self.push(key, format!("[{}]", list.join(", ")))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, entries)) in self.sections.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "[{name}]")?;
            for (k, v) in entries {
                writeln!(f, "{k} = {v}")?;
            }
        }
        Ok(())
    }
}
