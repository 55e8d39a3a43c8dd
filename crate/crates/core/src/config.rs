//! Plain-text configuration files: UTF-8 `key = value` lines with `#`
//! comments. Keys mirror [`StylizationConfig`] field names; layers are
//! configured with 1-based `layer.N.<param>` keys and fall back to the
//! default four-layer set when no layer key is present.
//!
//! ```text
//! # two coarse-to-fine layers
//! rng_seed = 7
//! field_kind = structure_tensor
//! layer.1.scale_factor = 4
//! layer.1.stroke_length = 200
//! layer.1.stroke_width = 12
//! layer.1.color_threshold = 80
//! layer.2.scale_factor = 1
//! layer.2.stroke_length = 60
//! layer.2.stroke_width = 4
//! layer.2.color_threshold = 40
//! ```

use crate::field::estimator_or_err;
use crate::pipeline::{LayerParams, LengthSpace, ResizeMode, StylizationConfig, MAX_RGB_DISTANCE};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// Errors raised while reading or parsing a configuration file. Every
/// variant names the offending key, line, or path.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read config file `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown config key `{key}`")]
    UnknownKey { key: String },
    #[error("invalid value for config key `{key}`: {message}")]
    InvalidValue { key: String, message: String },
    #[error("missing config key `{key}`")]
    MissingKey { key: String },
}

const LAYER_PARAM_NAMES: [&str; 4] =
    ["scale_factor", "stroke_length", "stroke_width", "color_threshold"];

/// Reads and parses a configuration file.
///
/// # Errors
/// [`ConfigError::Io`] when the file cannot be read, otherwise the parse
/// errors of [`parse_config_str`].
pub fn parse_config_file(path: &Path) -> Result<StylizationConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config_str(&text)
}

/// Parses configuration text into a [`StylizationConfig`], starting from
/// the defaults and overriding each mentioned key. When the same key
/// appears twice, the last occurrence wins.
///
/// # Errors
/// Naming the offending key or line: [`ConfigError::Syntax`] for
/// malformed lines, [`ConfigError::UnknownKey`] for unrecognized keys,
/// [`ConfigError::InvalidValue`] for unparsable or out-of-range values,
/// and [`ConfigError::MissingKey`] for incomplete layer blocks.
pub fn parse_config_str(text: &str) -> Result<StylizationConfig, ConfigError> {
    let mut cfg = StylizationConfig::default();
    let mut layer_values: BTreeMap<usize, BTreeMap<usize, f64>> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: idx + 1,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax { line: idx + 1, message: "empty key".into() });
        }
        apply_key(&mut cfg, &mut layer_values, key, value)?;
    }

    if !layer_values.is_empty() {
        cfg.layers = assemble_layers(&layer_values)?;
    }
    Ok(cfg)
}

fn apply_key(
    cfg: &mut StylizationConfig,
    layer_values: &mut BTreeMap<usize, BTreeMap<usize, f64>>,
    key: &str,
    value: &str,
) -> Result<(), ConfigError> {
    if key.starts_with("layer.") {
        return apply_layer_key(layer_values, key, value);
    }
    match key {
        "field_kind" => {
            let estimator = estimator_or_err(value).map_err(|e| ConfigError::InvalidValue {
                key: key.into(),
                message: e.to_string(),
            })?;
            cfg.field_kind = estimator.name().to_string();
        }
        "sigma_d" => cfg.sigma_d = positive_f64(key, value)?,
        "rho" => cfg.rho = positive_f64(key, value)?,
        "coherence_min" => {
            let v = finite_f64(key, value)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(ConfigError::InvalidValue {
                    key: key.into(),
                    message: format!("must be in [0, 1], got {v}"),
                });
            }
            cfg.coherence_min = v;
        }
        "rng_seed" => {
            cfg.rng_seed = value.parse().map_err(|_| ConfigError::InvalidValue {
                key: key.into(),
                message: format!("expected an unsigned 64-bit integer, got `{value}`"),
            })?;
        }
        "initial_step" => cfg.initial_step = positive_f64(key, value)?,
        "min_step" => cfg.min_step = positive_f64(key, value)?,
        "max_step" => {
            cfg.max_step =
                if value == "auto" { None } else { Some(positive_f64(key, value)?) };
        }
        "error_tol" => cfg.error_tol = positive_f64(key, value)?,
        "rdp_epsilon" => {
            let v = finite_f64(key, value)?;
            if v < 0.0 {
                return Err(ConfigError::InvalidValue {
                    key: key.into(),
                    message: format!("must be non-negative, got {v}"),
                });
            }
            cfg.rdp_epsilon = v;
        }
        "fit_error" => cfg.fit_error = positive_f64(key, value)?,
        "background" => {
            let parts: Vec<&str> = value.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(ConfigError::InvalidValue {
                    key: key.into(),
                    message: format!("expected `r,g,b`, got `{value}`"),
                });
            }
            let mut rgb = [0.0; 3];
            for (slot, part) in rgb.iter_mut().zip(&parts) {
                let v = finite_f64(key, part)?;
                if !(0.0..=255.0).contains(&v) {
                    return Err(ConfigError::InvalidValue {
                        key: key.into(),
                        message: format!("channels must be in [0, 255], got {v}"),
                    });
                }
                *slot = v;
            }
            cfg.background = rgb;
        }
        "resize_mode" => {
            cfg.resize_mode = match value {
                "resize" => ResizeMode::Resize,
                "blur_only" => ResizeMode::BlurOnly,
                _ => {
                    return Err(ConfigError::InvalidValue {
                        key: key.into(),
                        message: format!("expected `resize` or `blur_only`, got `{value}`"),
                    })
                }
            };
        }
        "length_space" => {
            cfg.length_space = match value {
                "working" => LengthSpace::Working,
                "original" => LengthSpace::Original,
                _ => {
                    return Err(ConfigError::InvalidValue {
                        key: key.into(),
                        message: format!("expected `working` or `original`, got `{value}`"),
                    })
                }
            };
        }
        "bidirectional" => cfg.bidirectional = parse_bool(key, value)?,
        "seed_jitter" => cfg.seed_jitter = parse_bool(key, value)?,
        _ => return Err(ConfigError::UnknownKey { key: key.into() }),
    }
    Ok(())
}

fn apply_layer_key(
    layer_values: &mut BTreeMap<usize, BTreeMap<usize, f64>>,
    key: &str,
    value: &str,
) -> Result<(), ConfigError> {
    let mut parts = key.splitn(3, '.');
    let _ = parts.next(); // "layer"
    let index_part = parts.next().unwrap_or("");
    let param_part = parts.next().unwrap_or("");
    let index: usize = index_part.parse().map_err(|_| ConfigError::InvalidValue {
        key: key.into(),
        message: format!("layer index must be a positive integer, got `{index_part}`"),
    })?;
    if index == 0 {
        return Err(ConfigError::InvalidValue {
            key: key.into(),
            message: "layer indices are 1-based".into(),
        });
    }
    let Some(param) = LAYER_PARAM_NAMES.iter().position(|&n| n == param_part) else {
        return Err(ConfigError::UnknownKey { key: key.into() });
    };
    let v = finite_f64(key, value)?;
    let bound = if param == 3 { 0.0..=MAX_RGB_DISTANCE } else { f64::MIN_POSITIVE..=f64::MAX };
    if !bound.contains(&v) {
        return Err(ConfigError::InvalidValue {
            key: key.into(),
            message: format!("out of range value {v}"),
        });
    }
    layer_values.entry(index).or_default().insert(param, v);
    Ok(())
}

fn assemble_layers(
    layer_values: &BTreeMap<usize, BTreeMap<usize, f64>>,
) -> Result<Vec<LayerParams>, ConfigError> {
    let max = *layer_values.keys().last().expect("non-empty");
    let mut layers = Vec::with_capacity(max);
    for index in 1..=max {
        let Some(values) = layer_values.get(&index) else {
            return Err(ConfigError::MissingKey {
                key: format!("layer.{index}.{}", LAYER_PARAM_NAMES[0]),
            });
        };
        let mut fetched = [0.0; 4];
        for (param, slot) in fetched.iter_mut().enumerate() {
            *slot = *values.get(&param).ok_or_else(|| ConfigError::MissingKey {
                key: format!("layer.{index}.{}", LAYER_PARAM_NAMES[param]),
            })?;
        }
        layers.push(LayerParams {
            scale_factor: fetched[0],
            stroke_length: fetched[1],
            stroke_width: fetched[2],
            color_threshold: fetched[3],
        });
    }
    Ok(layers)
}

fn finite_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v: f64 = value.parse().map_err(|_| ConfigError::InvalidValue {
        key: key.into(),
        message: format!("expected a number, got `{value}`"),
    })?;
    if !v.is_finite() {
        return Err(ConfigError::InvalidValue {
            key: key.into(),
            message: format!("must be finite, got {v}"),
        });
    }
    Ok(v)
}

fn positive_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    let v = finite_f64(key, value)?;
    if v <= 0.0 {
        return Err(ConfigError::InvalidValue {
            key: key.into(),
            message: format!("must be positive, got {v}"),
        });
    }
    Ok(v)
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ConfigError::InvalidValue {
            key: key.into(),
            message: format!("expected `true` or `false`, got `{value}`"),
        }),
    }
}
