n = int(input())
tmp = 1
m = 1
while n > 1:
    m = m * n
    n = n - 1
print(m)
