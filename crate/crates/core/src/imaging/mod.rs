//! Grayscale images, blur kernels, the periodic blur operator, noise,
//! SNR and PGM input/output.

mod blur;
mod image;
mod kernel;
mod metrics;
mod noise;
mod pgm;
mod phantom;

pub use blur::{make_blur_map, BlurMap};
pub use image::Image;
pub use kernel::{gaussian_kernel, motion_kernel, Kernel, KernelSpec};
pub use metrics::{snr_db, snr_db_slices, SnrObserver};
pub use noise::{add_noise, NoiseSpec};
pub use pgm::{decode_pgm, encode_pgm, load_pgm, quantize, save_pgm, write_atomic, PgmFormat};
pub use phantom::phantom;
