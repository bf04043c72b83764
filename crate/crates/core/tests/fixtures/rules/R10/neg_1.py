from keras.models import Sequential
import gc
for i in range(3):
    m = Sequential()
    gc.collect()
