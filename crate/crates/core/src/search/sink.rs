use std::io::{self, BufWriter, Write};

use super::Tuple;
use crate::filters::CertificateRecord;

/// Receives the certificate stream of a sweep, in deterministic order.
pub trait SearchSink {
    /// When false, certificate records are never built and
    /// [`SearchSink::certificate`] is not called.
    fn wants_certificates(&self) -> bool {
        true
    }

    fn certificate(&mut self, record: &CertificateRecord) -> io::Result<()>;

    fn solution(&mut self, _tuple: &Tuple) -> io::Result<()> {
        Ok(())
    }

    fn finish(&mut self) -> io::Result<()> {
        Ok(())
    }
}

impl<F> SearchSink for F
where
    F: FnMut(&CertificateRecord) -> io::Result<()>,
{
    fn certificate(&mut self, record: &CertificateRecord) -> io::Result<()> {
        self(record)
    }
}

/// Appends one JSON object per line.
pub struct JsonLinesSink<W: Write> {
    out: BufWriter<W>,
    written: u64,
}

impl<W: Write> JsonLinesSink<W> {
    pub fn new(out: W) -> Self {
        JsonLinesSink { out: BufWriter::new(out), written: 0 }
    }

    pub fn written(&self) -> u64 {
        self.written
    }
}

impl<W: Write> SearchSink for JsonLinesSink<W> {
    fn certificate(&mut self, record: &CertificateRecord) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")?;
        self.written += 1;
        Ok(())
    }

    fn finish(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}
