use std::fmt::Display;

/// Output of one subcommand: key/value facts for machine-readable mode and
/// prose lines for people, built side by side.
#[derive(Debug, Default)]
pub struct Report {
    facts: Vec<(String, String)>,
    human: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputMode {
    Human,
    Kv,
}

impl Report {
    pub fn fact(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.facts.push((key.to_string(), value.to_string()));
        self
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.human.push(text.into());
        self
    }

    pub fn render(&self, mode: OutputMode) -> String {
        let mut out = String::new();
        match mode {
            OutputMode::Kv => {
                for (k, v) in &self.facts {
                    out.push_str(k);
                    out.push('=');
                    out.push_str(v);
                    out.push('\n');
                }
            }
            OutputMode::Human => {
                for l in &self.human {
                    out.push_str(l);
                    out.push('\n');
                }
            }
        }
        out
    }
}
