//! Output sinks. JSON results are wrapped as `{provenance, result}`; CSV and
//! text written to a file get `# key=value` provenance lines on top.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
}

impl Provenance {
    pub fn new(command: String, config: RunConfig) -> Self {
        Self { tool: "nilspec", version: env!("CARGO_PKG_VERSION"), command, config }
    }

    fn header_lines(&self) -> Result<Vec<String>> {
        let config = serde_json::to_string(&self.config)?;
        Ok(vec![
            format!("# tool={}", self.tool),
            format!("# version={}", self.version),
            format!("# command={}", self.command),
            format!("# config={config}"),
        ])
    }
}

pub struct Sink {
    provenance: Provenance,
}

impl Sink {
    pub fn new(provenance: Provenance) -> Self {
        Self { provenance }
    }

    pub fn config(&self) -> &RunConfig {
        &self.provenance.config
    }

    fn open(&self) -> Result<(Box<dyn Write>, bool)> {
        Ok(match &self.provenance.config.output {
            Some(path) => {
                let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                (Box::new(BufWriter::new(f)), true)
            }
            None => (Box::new(io::stdout().lock()), false),
        })
    }

    pub fn json<T: Serialize>(&self, result: &T) -> Result<()> {
        #[derive(Serialize)]
        struct Wrapped<'a, T> {
            provenance: &'a Provenance,
            result: &'a T,
        }
        let (mut out, _) = self.open()?;
        serde_json::to_writer_pretty(&mut out, &Wrapped { provenance: &self.provenance, result })?;
        writeln!(out)?;
        out.flush()?;
        Ok(())
    }

    /// Text or CSV body produced by `body`.
    pub fn text(&self, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
        let (mut out, to_file) = self.open()?;
        if to_file {
            for line in self.provenance.header_lines()? {
                writeln!(out, "{line}")?;
            }
        }
        body(&mut out)?;
        out.flush()?;
        Ok(())
    }
}
