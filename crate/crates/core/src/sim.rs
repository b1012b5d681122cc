//! Deterministic Monte-Carlo evaluation harness: transmit codewords over
//! the AWGN channel with direct PSK mapping, decode each frame, and
//! aggregate frame/symbol error statistics per SNR point.
//!
//! Reproducibility contract: every frame draws from an RNG substream
//! derived from `(seed, frame index)`, frames are dispatched in fixed-size
//! batches whose layout does not depend on the worker count, and
//! aggregation folds outcomes in frame order. Identical configurations
//! therefore produce identical counters - and identical CSV bytes - for
//! any number of workers. Wall time is only measured when explicitly
//! requested, since a timing column would break byte-level reproducibility.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{sigma_from_es_n0_db, transmit_awgn, LlrMatrix, Modulation};
use crate::code::ParityCheckMatrix;
use crate::lclp_basic::{BasicConfig, BasicDecoder};
use crate::lclp_subgrad::{SubgradConfig, SubgradDecoder};
use crate::oracle;
use crate::{Error, Result};

/// Frames dispatched per scheduling round; the stopping rule is evaluated
/// at batch boundaries so that worker count cannot change which frames run.
const FRAME_BATCH: u64 = 64;

/// Which decoder the harness drives.
#[derive(Clone, Debug)]
pub enum DecoderChoice {
    Basic(BasicConfig),
    Subgrad(SubgradConfig),
    /// Exhaustive maximum-likelihood reference (tiny codes only).
    OracleMl,
}

/// Where transmitted codewords come from.
#[derive(Clone, Debug)]
pub enum CodewordSource {
    /// The all-zero word (a codeword of every matrix).
    AllZero,
    /// Uniformly drawn from an explicit list (pre-enumerated for tiny
    /// codes, or externally supplied encodings).
    List(Vec<Vec<u8>>),
}

/// Full description of a simulation run.
#[derive(Clone, Debug)]
pub struct SimConfig {
    pub matrix: ParityCheckMatrix,
    pub decoder: DecoderChoice,
    pub snr_db: Vec<f64>,
    /// Hard cap on simulated frames per point.
    pub max_frames: u64,
    /// Stop a point once this many frame errors are seen; one entry for
    /// all points or one entry per point.
    pub target_frame_errors: Vec<u64>,
    pub seed: u64,
    pub source: CodewordSource,
    pub workers: usize,
    /// Fill `wall_time` with measured seconds. Off by default: timing is
    /// not reproducible, and the CSV is specified to be.
    pub measure_time: bool,
}

impl SimConfig {
    pub fn new(matrix: ParityCheckMatrix, decoder: DecoderChoice, snr_db: Vec<f64>) -> Self {
        SimConfig {
            matrix,
            decoder,
            snr_db,
            max_frames: 1_000_000,
            target_frame_errors: vec![100],
            seed: 0,
            source: CodewordSource::AllZero,
            workers: 1,
            measure_time: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.snr_db.is_empty() {
            return Err(Error::config("snr_db list must be nonempty"));
        }
        if self.max_frames == 0 {
            return Err(Error::config("max_frames must be at least 1"));
        }
        if self.workers == 0 {
            return Err(Error::config("workers must be at least 1"));
        }
        if self.target_frame_errors.len() != 1
            && self.target_frame_errors.len() != self.snr_db.len()
        {
            return Err(Error::config(
                "target_frame_errors must have one entry or one per SNR point",
            ));
        }
        if let CodewordSource::List(words) = &self.source {
            if words.is_empty() {
                return Err(Error::config("codeword list must be nonempty"));
            }
            for w in words {
                if !self.matrix.is_codeword(w)? {
                    return Err(Error::config(format!("listed word {w:?} is not a codeword")));
                }
            }
        }
        Ok(())
    }

    fn target_for(&self, point: usize) -> u64 {
        if self.target_frame_errors.len() == 1 {
            self.target_frame_errors[0]
        } else {
            self.target_frame_errors[point]
        }
    }
}

/// Aggregated statistics of one SNR point.
#[derive(Clone, Debug, PartialEq)]
pub struct SimPoint {
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub symbol_errors: u64,
    pub symbols_total: u64,
    pub erasures: u64,
    pub fer: f64,
    pub ser: f64,
    pub avg_iterations: f64,
    pub wall_time: f64,
}

enum FrameDecoder {
    Basic(BasicDecoder),
    Subgrad(SubgradDecoder),
    Ml { codebook: Vec<Vec<u8>> },
}

impl FrameDecoder {
    fn build(config: &SimConfig) -> Result<Self> {
        Ok(match &config.decoder {
            DecoderChoice::Basic(c) => {
                FrameDecoder::Basic(BasicDecoder::new(config.matrix.clone(), c.clone())?)
            }
            DecoderChoice::Subgrad(c) => {
                FrameDecoder::Subgrad(SubgradDecoder::new(config.matrix.clone(), c.clone())?)
            }
            DecoderChoice::OracleMl => FrameDecoder::Ml {
                codebook: oracle::enumerate_codewords(&config.matrix)?,
            },
        })
    }

    fn decode(&self, llr: &LlrMatrix) -> Result<(Vec<Option<u8>>, u64)> {
        Ok(match self {
            FrameDecoder::Basic(d) => {
                let res = d.decode(llr)?;
                (res.symbols, res.iterations as u64)
            }
            FrameDecoder::Subgrad(d) => {
                let res = d.decode(llr)?;
                (res.symbols, res.iterations as u64)
            }
            FrameDecoder::Ml { codebook } => {
                let (word, _) = oracle::ml_among(codebook, llr);
                (word.into_iter().map(Some).collect(), 0)
            }
        })
    }
}

#[derive(Clone, Copy, Default)]
struct FrameOutcome {
    frame_error: bool,
    symbol_errors: u64,
    erasures: u64,
    iterations: u64,
}

fn simulate_frame(
    config: &SimConfig,
    decoder: &FrameDecoder,
    modulation: &Modulation,
    sigma: f64,
    frame: u64,
) -> Result<FrameOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(frame);
    let n = config.matrix.num_cols();
    let word: Vec<u8> = match &config.source {
        CodewordSource::AllZero => vec![0; n],
        CodewordSource::List(words) => words[rng.random_range(0..words.len())].clone(),
    };
    let tx = modulation.map_word(&word);
    let rx = transmit_awgn(&tx, sigma, &mut rng)?;
    let llr = LlrMatrix::from_received(modulation, &rx, sigma)?;
    let (symbols, iterations) = decoder.decode(&llr)?;
    let mut out = FrameOutcome {
        iterations,
        ..FrameOutcome::default()
    };
    for (est, &sent) in symbols.iter().zip(&word) {
        match est {
            Some(c) if *c == sent => {}
            Some(_) => out.symbol_errors += 1,
            None => {
                // erased symbols count as symbol errors as well
                out.symbol_errors += 1;
                out.erasures += 1;
            }
        }
    }
    out.frame_error = out.symbol_errors > 0;
    Ok(out)
}

/// Simulates one SNR point of the sweep.
pub fn run_point(config: &SimConfig, point: usize) -> Result<SimPoint> {
    config.validate()?;
    let snr_db = config.snr_db[point];
    let target = config.target_for(point);
    let sigma = sigma_from_es_n0_db(snr_db);
    let modulation = Modulation::psk(config.matrix.ring().q())?;
    let decoder = FrameDecoder::build(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::config(format!("thread pool: {e}")))?;

    let started = Instant::now();
    let mut frames = 0u64;
    let mut frame_errors = 0u64;
    let mut symbol_errors = 0u64;
    let mut erasures = 0u64;
    let mut iterations = 0u64;
    while frames < config.max_frames && frame_errors < target {
        let hi = (frames + FRAME_BATCH).min(config.max_frames);
        let outcomes: Vec<Result<FrameOutcome>> = pool.install(|| {
            (frames..hi)
                .into_par_iter()
                .map(|f| simulate_frame(config, &decoder, &modulation, sigma, f))
                .collect()
        });
        for outcome in outcomes {
            let o = outcome?;
            frame_errors += o.frame_error as u64;
            symbol_errors += o.symbol_errors;
            erasures += o.erasures;
            iterations += o.iterations;
        }
        frames = hi;
    }
    let symbols_total = frames * config.matrix.num_cols() as u64;
    Ok(SimPoint {
        snr_db,
        frames,
        frame_errors,
        symbol_errors,
        symbols_total,
        erasures,
        fer: frame_errors as f64 / frames as f64,
        ser: symbol_errors as f64 / symbols_total as f64,
        avg_iterations: iterations as f64 / frames as f64,
        wall_time: if config.measure_time {
            started.elapsed().as_secs_f64()
        } else {
            0.0
        },
    })
}

/// Simulates every SNR point in order.
pub fn run_sweep(config: &SimConfig) -> Result<Vec<SimPoint>> {
    config.validate()?;
    (0..config.snr_db.len())
        .map(|p| run_point(config, p))
        .collect()
}

/// Writes the sweep as CSV with the stable column set.
pub fn write_csv<W: Write>(points: &[SimPoint], mut sink: W) -> std::io::Result<()> {
    writeln!(
        sink,
        "snr_db,frames,frame_errors,symbol_errors,erasures,fer,ser,avg_iters,seconds"
    )?;
    for p in points {
        writeln!(
            sink,
            "{},{},{},{},{},{},{},{},{}",
            p.snr_db,
            p.frames,
            p.frame_errors,
            p.symbol_errors,
            p.erasures,
            p.fer,
            p.ser,
            p.avg_iterations,
            p.wall_time
        )?;
    }
    Ok(())
}

/// Parses a codeword list: one word per line, `n` whitespace-separated
/// symbols in `0..q`.
pub fn parse_codewords(text: &str, matrix: &ParityCheckMatrix) -> Result<Vec<Vec<u8>>> {
    let n = matrix.num_cols();
    let q = matrix.ring().q();
    let mut words = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let word: Vec<u8> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u8>()
                    .ok()
                    .filter(|&v| (v as usize) < q)
                    .ok_or_else(|| Error::parse(format!("line {}: bad symbol {tok:?}", lineno + 1)))
            })
            .collect::<Result<_>>()?;
        if word.len() != n {
            return Err(Error::parse(format!(
                "line {}: expected {n} symbols, got {}",
                lineno + 1,
                word.len()
            )));
        }
        words.push(word);
    }
    if words.is_empty() {
        return Err(Error::parse("empty codeword file"));
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Kappa;

    const SAMPLE: &str = "Z4 3 5\n1:1 2:3 3:1\n2:1 4:1\n1:3 5:1\n";

    fn base_config() -> SimConfig {
        let matrix = ParityCheckMatrix::parse(SAMPLE).unwrap();
        SimConfig::new(
            matrix,
            DecoderChoice::Basic(BasicConfig {
                kappa: Kappa::Inf,
                ..BasicConfig::default()
            }),
            vec![8.0],
        )
    }

    #[test]
    fn high_snr_is_error_free() {
        let mut cfg = base_config();
        cfg.snr_db = vec![40.0];
        cfg.max_frames = 100;
        cfg.target_frame_errors = vec![100];
        let p = run_point(&cfg, 0).unwrap();
        assert_eq!(p.frames, 100);
        assert_eq!(p.frame_errors, 0);
        assert_eq!(p.fer, 0.0);
        assert_eq!(p.symbols_total, 500);
        assert!(p.avg_iterations >= 1.0);
        assert_eq!(p.wall_time, 0.0);
    }

    #[test]
    fn single_frame_contract() {
        let mut cfg = base_config();
        cfg.max_frames = 1;
        cfg.target_frame_errors = vec![1];
        let p = run_point(&cfg, 0).unwrap();
        assert_eq!(p.frames, 1);
    }

    #[test]
    fn worker_count_does_not_change_counters() {
        let mut cfg = base_config();
        cfg.snr_db = vec![4.0, 7.0];
        cfg.max_frames = 300;
        cfg.target_frame_errors = vec![20];
        cfg.seed = 5;
        cfg.source = CodewordSource::List(oracle::enumerate_codewords(&cfg.matrix).unwrap());
        let single = run_sweep(&cfg).unwrap();
        cfg.workers = 4;
        let multi = run_sweep(&cfg).unwrap();
        assert_eq!(single, multi);
        let mut csv1 = Vec::new();
        write_csv(&single, &mut csv1).unwrap();
        let mut csv2 = Vec::new();
        write_csv(&multi, &mut csv2).unwrap();
        assert_eq!(csv1, csv2);
    }

    #[test]
    fn csv_shape() {
        let mut cfg = base_config();
        cfg.snr_db = vec![6.0, 8.0, 10.0];
        cfg.max_frames = 64;
        let points = run_sweep(&cfg).unwrap();
        let mut out = Vec::new();
        write_csv(&points, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(
            lines[0],
            "snr_db,frames,frame_errors,symbol_errors,erasures,fer,ser,avg_iters,seconds"
        );
        for line in &lines[1..] {
            assert_eq!(line.split(',').count(), 9);
        }
    }

    #[test]
    fn counter_conservation() {
        let mut cfg = base_config();
        cfg.snr_db = vec![3.0];
        cfg.max_frames = 500;
        cfg.target_frame_errors = vec![u64::MAX];
        let p = run_point(&cfg, 0).unwrap();
        assert_eq!(p.frames, 500);
        assert!(p.symbol_errors >= p.erasures);
        assert!(p.symbol_errors <= p.symbols_total);
        assert!(p.fer <= 1.0 && p.ser <= 1.0);
        assert!(p.avg_iterations <= 100.0);
        assert!(p.frame_errors > 0, "3 dB should produce errors");
    }

    #[test]
    fn ml_reference_decoder_runs() {
        let mut cfg = base_config();
        cfg.decoder = DecoderChoice::OracleMl;
        cfg.snr_db = vec![6.0];
        cfg.max_frames = 200;
        cfg.source = CodewordSource::List(oracle::enumerate_codewords(&cfg.matrix).unwrap());
        let p = run_point(&cfg, 0).unwrap();
        assert_eq!(p.avg_iterations, 0.0);
        assert_eq!(p.erasures, 0);
    }

    #[test]
    fn codeword_file_parsing() {
        let matrix = ParityCheckMatrix::parse(SAMPLE).unwrap();
        let words = parse_codewords("0 0 0 0 0\n1 1 0 3 1\n", &matrix).unwrap();
        assert_eq!(words.len(), 2);
        assert!(parse_codewords("0 0 0\n", &matrix).is_err());
        assert!(parse_codewords("0 0 0 0 7\n", &matrix).is_err());
        assert!(parse_codewords("", &matrix).is_err());

        let mut cfg = base_config();
        // a non-codeword in the source is a configuration error
        cfg.source = CodewordSource::List(vec![vec![1, 0, 0, 0, 0]]);
        assert!(run_point(&cfg, 0).is_err());
    }

    #[test]
    fn gf8_end_to_end() {
        // the full stack over GF(8) with 8-PSK: clean at high SNR for both
        // decoders, busy but consistent at moderate SNR
        let matrix = ParityCheckMatrix::parse("GF8 2 4\n1:1 2:2 3:4\n2:3 4:1\n").unwrap();
        let codebook = oracle::enumerate_codewords(&matrix).unwrap();
        assert_eq!(codebook.len(), 64);
        for decoder in [
            DecoderChoice::Basic(BasicConfig::default()),
            DecoderChoice::Subgrad(crate::lclp_subgrad::SubgradConfig::default()),
        ] {
            let mut cfg = SimConfig::new(matrix.clone(), decoder, vec![30.0]);
            cfg.max_frames = 200;
            cfg.target_frame_errors = vec![u64::MAX];
            cfg.source = CodewordSource::List(codebook.clone());
            cfg.seed = 21;
            let p = run_point(&cfg, 0).unwrap();
            assert_eq!(p.frame_errors, 0, "{:?}", cfg.decoder);
        }
        let mut cfg = SimConfig::new(
            matrix,
            DecoderChoice::Basic(BasicConfig::default()),
            vec![12.0],
        );
        cfg.max_frames = 500;
        cfg.target_frame_errors = vec![u64::MAX];
        cfg.source = CodewordSource::List(codebook);
        let p = run_point(&cfg, 0).unwrap();
        assert!(p.frame_errors > 0 && p.fer < 0.5, "fer {}", p.fer);
        assert_eq!(p.symbols_total, 2000);
    }

    #[test]
    fn per_point_targets() {
        let mut cfg = base_config();
        cfg.snr_db = vec![2.0, 3.0];
        cfg.target_frame_errors = vec![5, 10];
        cfg.max_frames = 10_000;
        let points = run_sweep(&cfg).unwrap();
        assert!(points[0].frame_errors >= 5);
        assert!(points[1].frame_errors >= 10);
        cfg.target_frame_errors = vec![1, 2, 3];
        assert!(run_sweep(&cfg).is_err());
    }
}
